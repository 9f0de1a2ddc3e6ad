#ifndef SFCMFG_MFG_HPP
#define SFCMFG_MFG_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sfcmfg/scenario.hpp"

namespace sfcmfg::mfg {

// Successor-list digraph the density/value recursions run on. States without
// successors are terminal (they absorb density and carry terminal value).
struct Digraph {
    std::vector<std::vector<int>> successors;

    int size() const { return static_cast<int>(successors.size()); }
    int successor_count(int state) const { return static_cast<int>(successors[state].size()); }
    int successor(int state, int k) const { return successors[state][k]; }
};

// Layered decision graph for one chain. State 0 is a synthetic source whose
// outgoing row chooses the ingress node; state 1 + level*N + node hosts the
// chain's VNF at `level` on `node`. Edges go level -> level + 1 between any
// node pair, so transitions follow the chain order by construction. States
// at the last level are terminal.
struct StateSpace {
    std::size_t chain = 0;  // chain index in the scenario
    int levels = 0;         // chain length
    int nodes = 0;

    int source() const { return 0; }
    int state_of(int level, int node) const { return 1 + level * nodes + node; }
    int size() const { return 1 + levels * nodes; }
    // Level of a state; -1 for the source.
    int level_of(int state) const { return state == 0 ? -1 : (state - 1) / nodes; }
    // Hosting node of a state; -1 for the source.
    int node_of(int state) const { return state == 0 ? -1 : (state - 1) % nodes; }

    bool is_terminal(int state) const { return level_of(state) == levels - 1; }
    int successor_count(int state) const { return is_terminal(state) ? 0 : nodes; }
    // The k-th successor of `state` (the VNF of the next level on node k).
    int successor(int state, int k) const { return state_of(level_of(state) + 1, k); }

    Digraph graph() const;
};

std::vector<StateSpace> build_state_spaces(const Scenario& scenario);

// Population density over states; nonnegative, mass preserved by forward
// propagation.
using DensityVector = std::vector<double>;
using ValueVector = std::vector<double>;

// Row-stochastic transitions. rows[s][k] is the probability of moving from
// `s` to its k-th successor; terminal states carry empty rows, so support
// outside the allowed edges is impossible by construction.
struct TransitionMatrix {
    std::vector<std::vector<double>> rows;

    static TransitionMatrix uniform(const Digraph& graph);
};

// Throws std::invalid_argument unless every non-terminal row is a
// probability vector (sum 1 +- 1e-9, entries in [0, 1]).
void require_stochastic(const Digraph& graph, const TransitionMatrix& matrix);

enum class FpkForm {
    // theta'(s') = sum_s P[s][s'] theta(s): mass flows along transitions and
    // is conserved (terminal states are absorbing).
    Forward,
    // The printed adjoint form theta'(s) = sum_s' P[s][s'] theta(s'), kept
    // for comparison only; not mass-conserving in general.
    Literal,
};

DensityVector fpk_step(const Digraph& graph, const DensityVector& density,
                       const TransitionMatrix& matrix, FpkForm form = FpkForm::Forward);

// Edge rewards aligned with the digraph: values[s][k] is the reward of
// moving from s to its k-th successor.
struct RewardKernel {
    std::vector<std::vector<double>> values;
};

struct KernelParams {
    double beta_ref = 1.0e6;      // reference packet size, bytes
    bool congestion = true;       // include the mean-field load penalty
    // Penalty weight, ms per unit of relative overload; <= 0 selects
    // 10x the largest single-hop transmission delay of the scenario.
    double congestion_lambda = 0.0;
};

double default_congestion_lambda(const Scenario& scenario, double beta_ref);

// Expected per-node resource usage induced by chain density trajectories:
// each level's distribution contributes its VNF demand where it sits.
std::vector<ResourceVector> projected_loads(const Scenario& scenario,
                                            const std::vector<StateSpace>& spaces,
                                            const std::vector<std::vector<DensityVector>>& theta_traj);

// Relative overload of a node: sum over resource components of
// max(0, load - capacity) / capacity. Zero inside capacity.
double node_overload(const ResourceVector& load, const ResourceVector& capacity);

// Kernel for one chain at the given projected loads: negative incremental
// delay of the move (hop transmission at beta_ref plus processing of the
// target VNF on the target node) minus lambda * overload(target node).
RewardKernel make_kernel(const Scenario& scenario, const StateSpace& space,
                         const std::vector<ResourceVector>& loads, const KernelParams& params);

// Congestion-free kernel (loads ignored).
RewardKernel make_kernel_free(const Scenario& scenario, const StateSpace& space,
                              const KernelParams& params);

// r_j(theta, P_j) = sum_k P[state][k] * kernel[state][k].
double expected_reward(const Digraph& graph, const RewardKernel& kernel,
                       const TransitionMatrix& matrix, int state);

// mu_j = sum_k P[state][k] * (kernel[state][k] + V_next[successor]).
double average_reward(const Digraph& graph, const RewardKernel& kernel,
                      const TransitionMatrix& matrix, const ValueVector& v_next, int state);

enum class TieBreak {
    LowestIndex,   // deterministic: first maximizing successor wins
    UniformArgmax, // uniform mixture over all maximizing successors
};

// One synchronous backward step: per non-terminal state the row maximizing
// sum q * (r + V_next) — a point mass on the best successor (or a uniform
// mixture over ties). Terminal states carry their previous value forward.
std::pair<ValueVector, TransitionMatrix> hjb_backstep(const Digraph& graph,
                                                      const RewardKernel& kernel,
                                                      const ValueVector& v_next,
                                                      TieBreak tie = TieBreak::LowestIndex);

struct ChainSolution {
    // Indexed [t][state] for t = 0..horizon (V[horizon] is the terminal 0).
    std::vector<ValueVector> v_traj;
    // Indexed [t], rows used for the step t -> t+1.
    std::vector<TransitionMatrix> p_traj;
    // Indexed [t][state]; theta[0] is the initial density. Stored exactly
    // until the mass reaches the terminal level.
    std::vector<DensityVector> theta_traj;
};

struct MfgSolution {
    std::vector<ChainSolution> chains;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;  // last max-norm change over V and theta
    std::vector<ResourceVector> loads;  // projected loads at the solution
    // Per outer iteration: (residual, kernel delta), for convergence plots.
    std::vector<std::pair<double, double>> trace;
};

struct SolveOptions {
    KernelParams kernel;
    int horizon = 0;          // <= 0: chain length
    double tol = 1e-10;
    int max_iters = 200;
    double damping = 0.5;     // theta <- (1-eta) theta_old + eta theta_new
    TieBreak tie = TieBreak::LowestIndex;
    // Start the density uniformly over the ingress states instead of as a
    // point mass at the source.
    bool uniform_ingress_init = false;
};

// Coupled backward/forward iteration across all chains: kernels are rebuilt
// from the current density trajectories each outer pass, the backward sweep
// refreshes V and rows, the forward sweep re-propagates theta (damped).
// Stops when the kernel is stationary or successive V/theta trajectories
// move less than tol in max norm.
MfgSolution solve_mfg(const Scenario& scenario, const std::vector<StateSpace>& spaces,
                      const SolveOptions& options);

// Nash check: no single-row vertex deviation improves the average reward by
// more than epsilon, for any chain, time step, and non-terminal state.
// Kernels are evaluated at the solution's own loads.
bool verify_nash(const Scenario& scenario, const std::vector<StateSpace>& spaces,
                 const MfgSolution& solution, const KernelParams& params, double epsilon);

// Per-iteration convergence trace and final state export used by the run
// harness (columns documented in the README).
void write_solution_csvs(const std::string& out_dir, const Scenario& scenario,
                         const std::vector<StateSpace>& spaces, const MfgSolution& solution,
                         const std::vector<std::pair<double, double>>& iteration_residuals);

}  // namespace sfcmfg::mfg

#endif
