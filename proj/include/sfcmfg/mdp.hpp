#ifndef SFCMFG_MDP_HPP
#define SFCMFG_MDP_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sfcmfg/mfg.hpp"
#include "sfcmfg/rng.hpp"

namespace sfcmfg::rl {

// Snapshot of the learner's observation: the density over placement states
// together with the position reached inside the chain walk.
struct MdpState {
    mfg::DensityVector density;
    int chain_position = -1;  // -1 = at the source
};

// Tabular actor: unnormalized preference weights per (state, successor),
// decoded to a row-stochastic matrix by a temperature softmax.
struct Policy {
    // weights[chain][state][k], aligned with StateSpace successors.
    std::vector<std::vector<std::vector<double>>> weights;

    static Policy zeros(const std::vector<mfg::StateSpace>& spaces);
    mfg::TransitionMatrix decode(const mfg::StateSpace& space, std::size_t chain,
                                 double temperature) const;
};

// Tabular critic: one value estimate per state.
struct Critic {
    std::vector<mfg::ValueVector> values;  // [chain][state]

    static Critic zeros(const std::vector<mfg::StateSpace>& spaces);
};

struct EpisodeEntry {
    int episode = 0;
    double sampled_reward = 0.0;   // sum of edge rewards along the sampled walks
    double greedy_reward = 0.0;    // sum of edge rewards along the greedy walks
    double greedy_delay_ms = 0.0;  // objective of the decoded placement at beta_ref
    double temperature = 0.0;
    // Incoming edge reward at each (chain, position) along the greedy walk;
    // the data behind the per-VNF reward curves.
    std::vector<std::vector<double>> vnf_rewards;
};

struct TrainingLog {
    std::vector<EpisodeEntry> entries;
    bool diverged = false;
};

struct RlConfig {
    int episodes = 2000;
    double actor_lr = 0.05;
    double critic_lr = 0.1;
    double temperature_start = 1.0;
    double temperature_end = 0.1;
    double value_bound = 1.0e6;  // divergence guard on |V|
    mfg::KernelParams kernel;
    std::uint64_t seed = 0;
};

// R(theta, P) for one chain: density-weighted sum over the chain's states of
// the expected edge reward under P.
double mdp_reward(const mfg::Digraph& graph, const mfg::DensityVector& density,
                  const mfg::TransitionMatrix& matrix, const mfg::RewardKernel& kernel);

struct EdgeVisit {
    std::size_t chain = 0;
    int state = 0;
    int successor_k = 0;
    double reward = 0.0;
    double td_error = 0.0;
};

// One sampled traversal per chain from source to egress under the decoded
// rows; returns visited edges with TD errors r + V(s') - V(s).
std::vector<EdgeVisit> run_episode(const std::vector<mfg::StateSpace>& spaces,
                                   const std::vector<mfg::TransitionMatrix>& decoded,
                                   const std::vector<mfg::RewardKernel>& kernels,
                                   const Critic& critic, Rng& rng);

struct TrainResult {
    Policy policy;
    Critic critic;
    TrainingLog log;
};

// Per-episode observer for instrumentation (invoked after the updates).
using EpisodeObserver =
    std::function<void(int episode, const Policy&, const Critic&,
                       const std::vector<mfg::TransitionMatrix>& decoded)>;

// Actor-critic training loop. Each episode decodes the policy at the
// scheduled temperature, refreshes the density-dependent kernel, samples one
// walk per chain, applies the critic/actor updates along visited edges, and
// logs the greedy decode. Throws EvaluationError when |V| exceeds the bound.
TrainResult train(const Scenario& scenario, const std::vector<mfg::StateSpace>& spaces,
                  const RlConfig& config, const EpisodeObserver& observer = {});

// Greedy decode: walk each chain taking the argmax successor (ties to the
// lowest node index); a step that would break node capacity falls back to
// the best feasible successor by edge reward; throws EvaluationError when no
// successor fits.
PlacementMatrix extract_placement(const Scenario& scenario,
                                  const std::vector<mfg::StateSpace>& spaces,
                                  const std::vector<mfg::TransitionMatrix>& decoded,
                                  const std::vector<mfg::RewardKernel>& kernels);

// Convenience: decode at the final temperature with kernels at the
// policy-induced density.
PlacementMatrix extract_placement(const Scenario& scenario,
                                  const std::vector<mfg::StateSpace>& spaces,
                                  const Policy& policy, const RlConfig& config);

// Placement induced by a solved mean-field game: walks each chain along the
// solution's time-indexed rows with the same greedy capacity repair as the
// policy decode.
PlacementMatrix decode_mfg_solution(const Scenario& scenario,
                                    const std::vector<mfg::StateSpace>& spaces,
                                    const mfg::MfgSolution& solution,
                                    const mfg::KernelParams& params);

// Text snapshot (row-major weights) for reload and decode-only runs.
void save_policy(const std::string& path, const std::vector<mfg::StateSpace>& spaces,
                 const Policy& policy);
Policy load_policy(const std::string& path, const std::vector<mfg::StateSpace>& spaces);

// episode,sampled_reward,greedy_reward,greedy_delay_ms,temperature
void write_training_csv(const std::string& path, const TrainingLog& log);
// episode,chain,position,vnf,reward
void write_vnf_rewards_csv(const std::string& path, const Scenario& scenario,
                           const TrainingLog& log);

}  // namespace sfcmfg::rl

#endif
