#include "sfcmfg/mfg.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "sfcmfg/csv.hpp"
#include "sfcmfg/delay.hpp"

namespace sfcmfg::mfg {

Digraph StateSpace::graph() const {
    Digraph g;
    g.successors.resize(size());
    for (int s = 0; s < size(); ++s) {
        const int n = successor_count(s);
        g.successors[s].reserve(n);
        for (int k = 0; k < n; ++k) g.successors[s].push_back(successor(s, k));
    }
    return g;
}

std::vector<StateSpace> build_state_spaces(const Scenario& scenario) {
    std::vector<StateSpace> spaces;
    spaces.reserve(scenario.topology.chains.size());
    for (std::size_t k = 0; k < scenario.topology.chains.size(); ++k) {
        StateSpace space;
        space.chain = k;
        space.levels = static_cast<int>(scenario.topology.chains[k].length());
        space.nodes = static_cast<int>(scenario.topology.nodes.size());
        spaces.push_back(space);
    }
    return spaces;
}

TransitionMatrix TransitionMatrix::uniform(const Digraph& graph) {
    TransitionMatrix m;
    m.rows.resize(graph.size());
    for (int s = 0; s < graph.size(); ++s) {
        const int n = graph.successor_count(s);
        if (n > 0) m.rows[s].assign(n, 1.0 / n);
    }
    return m;
}

void require_stochastic(const Digraph& graph, const TransitionMatrix& matrix) {
    if (matrix.rows.size() != static_cast<std::size_t>(graph.size()))
        throw std::invalid_argument("transition matrix size does not match state space");
    for (int s = 0; s < graph.size(); ++s) {
        const auto& row = matrix.rows[s];
        const int n = graph.successor_count(s);
        if (row.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("row width does not match successor count");
        if (n == 0) continue;
        double sum = 0.0;
        for (double p : row) {
            if (p < -1e-12 || p > 1.0 + 1e-12)
                throw std::invalid_argument("transition probability outside [0, 1]");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("transition row does not sum to 1");
    }
}

DensityVector fpk_step(const Digraph& graph, const DensityVector& density,
                       const TransitionMatrix& matrix, FpkForm form) {
    if (density.size() != static_cast<std::size_t>(graph.size()))
        throw std::invalid_argument("density size does not match state space");
    require_stochastic(graph, matrix);
    for (double d : density)
        if (d < 0.0) throw std::invalid_argument("density entries must be nonnegative");

    DensityVector out(density.size(), 0.0);
    if (form == FpkForm::Forward) {
        for (int s = 0; s < graph.size(); ++s) {
            if (density[s] == 0.0) continue;
            const int n = graph.successor_count(s);
            if (n == 0) {
                out[s] += density[s];  // terminal states absorb
                continue;
            }
            for (int k = 0; k < n; ++k) out[graph.successor(s, k)] += density[s] * matrix.rows[s][k];
        }
    } else {
        // Adjoint orientation as printed; comparison only.
        for (int s = 0; s < graph.size(); ++s) {
            const int n = graph.successor_count(s);
            if (n == 0) {
                out[s] = density[s];
                continue;
            }
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += matrix.rows[s][k] * density[graph.successor(s, k)];
            out[s] = acc;
        }
    }
    return out;
}

double default_congestion_lambda(const Scenario& scenario, double beta_ref) {
    // 10x the largest single-hop transmission delay over all chain hops and
    // node pairs with a configured allocation.
    const Topology& topo = scenario.topology;
    double worst_hop = 0.0;
    for (std::size_t k = 0; k < topo.chains.size(); ++k) {
        const auto vnf_idx = topo.chain_vnf_indices(k);
        for (std::size_t p = 0; p + 1 < vnf_idx.size(); ++p) {
            for (std::size_t i = 0; i < topo.nodes.size(); ++i) {
                for (std::size_t i2 = 0; i2 < topo.nodes.size(); ++i2) {
                    if (i == i2) continue;
                    const auto rate = topo.allocation(i, i2, vnf_idx[p], vnf_idx[p + 1]);
                    if (!rate) continue;
                    const double hop = topo.vnfs[vnf_idx[p]].demand.transmission * beta_ref / *rate;
                    worst_hop = std::max(worst_hop, hop);
                }
            }
        }
    }
    return 10.0 * worst_hop;
}

std::vector<ResourceVector> projected_loads(
    const Scenario& scenario, const std::vector<StateSpace>& spaces,
    const std::vector<std::vector<DensityVector>>& theta_traj) {
    std::vector<ResourceVector> loads(scenario.topology.nodes.size());
    for (std::size_t c = 0; c < spaces.size(); ++c) {
        const StateSpace& space = spaces[c];
        const auto vnf_idx = scenario.topology.chain_vnf_indices(space.chain);
        // Each level's distribution contributes once; trajectories advance one
        // level per step and stop at the terminal level, so summing all stored
        // steps over placement states counts every VNF exactly once.
        for (const auto& theta : theta_traj[c]) {
            for (int s = 1; s < space.size(); ++s) {
                if (theta[s] == 0.0) continue;
                const int level = space.level_of(s);
                const int node = space.node_of(s);
                const ResourceVector& demand = scenario.topology.vnfs[vnf_idx[level]].demand;
                loads[node] += {demand.compute * theta[s], demand.storage * theta[s],
                                demand.transmission * theta[s]};
            }
        }
    }
    return loads;
}

double node_overload(const ResourceVector& load, const ResourceVector& capacity) {
    double overload = 0.0;
    for (int c = 0; c < kResourceComponents; ++c) {
        const double cap = capacity.component(c);
        if (cap <= 0.0) continue;
        overload += std::max(0.0, (load.component(c) - cap) / cap);
    }
    return overload;
}

namespace {

RewardKernel make_kernel_impl(const Scenario& scenario, const StateSpace& space,
                              const std::vector<ResourceVector>* loads,
                              const KernelParams& params) {
    const Topology& topo = scenario.topology;
    const auto vnf_idx = topo.chain_vnf_indices(space.chain);
    const double lambda = params.congestion_lambda > 0.0
                              ? params.congestion_lambda
                              : default_congestion_lambda(scenario, params.beta_ref);

    RewardKernel kernel;
    kernel.values.resize(space.size());
    for (int s = 0; s < space.size(); ++s) {
        const int n = space.successor_count(s);
        if (n == 0) continue;
        kernel.values[s].resize(n);
        const int from_level = space.level_of(s);
        for (int k = 0; k < n; ++k) {
            const int target = space.successor(s, k);
            const int to_node = space.node_of(target);
            const std::size_t to_vnf = vnf_idx[space.level_of(target)];

            // Processing of the target VNF on its hosting node.
            double delay = topo.vnfs[to_vnf].demand.compute * params.beta_ref /
                           topo.nodes[to_node].processing_capacity;

            // Hop transmission; the source has no predecessor VNF and a
            // same-node hop is free.
            if (s != space.source()) {
                const int from_node = space.node_of(s);
                if (from_node != to_node) {
                    const std::size_t from_vnf = vnf_idx[from_level];
                    const auto rate = topo.allocation(from_node, to_node, from_vnf, to_vnf);
                    if (!rate)
                        throw EvaluationError(
                            "kernel: no link allocation for " + topo.vnfs[from_vnf].id + "@" +
                            topo.nodes[from_node].id + " -> " + topo.vnfs[to_vnf].id + "@" +
                            topo.nodes[to_node].id);
                    delay += topo.vnfs[from_vnf].demand.transmission * params.beta_ref / *rate;
                }
            }

            double reward = -delay;
            if (params.congestion && loads != nullptr)
                reward -= lambda * node_overload((*loads)[to_node], topo.nodes[to_node].capacity);
            kernel.values[s][k] = reward;
        }
    }
    return kernel;
}

}  // namespace

RewardKernel make_kernel(const Scenario& scenario, const StateSpace& space,
                         const std::vector<ResourceVector>& loads, const KernelParams& params) {
    return make_kernel_impl(scenario, space, &loads, params);
}

RewardKernel make_kernel_free(const Scenario& scenario, const StateSpace& space,
                              const KernelParams& params) {
    KernelParams free_params = params;
    free_params.congestion = false;
    return make_kernel_impl(scenario, space, nullptr, free_params);
}

double expected_reward(const Digraph& graph, const RewardKernel& kernel,
                       const TransitionMatrix& matrix, int state) {
    const int n = graph.successor_count(state);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += matrix.rows[state][k] * kernel.values[state][k];
    return sum;
}

double average_reward(const Digraph& graph, const RewardKernel& kernel,
                      const TransitionMatrix& matrix, const ValueVector& v_next, int state) {
    const int n = graph.successor_count(state);
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
        sum += matrix.rows[state][k] *
               (kernel.values[state][k] + v_next[graph.successor(state, k)]);
    return sum;
}

std::pair<ValueVector, TransitionMatrix> hjb_backstep(const Digraph& graph,
                                                      const RewardKernel& kernel,
                                                      const ValueVector& v_next, TieBreak tie) {
    if (v_next.size() != static_cast<std::size_t>(graph.size()))
        throw std::invalid_argument("value vector size does not match state space");
    ValueVector v(graph.size(), 0.0);
    TransitionMatrix rows;
    rows.rows.resize(graph.size());
    for (int s = 0; s < graph.size(); ++s) {
        const int n = graph.successor_count(s);
        if (n == 0) {
            v[s] = v_next[s];  // terminal value carries forward
            continue;
        }
        if (kernel.values.size() <= static_cast<std::size_t>(s) ||
            kernel.values[s].size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("reward kernel does not cover the state's edges");
        double best = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k)
            best = std::max(best, kernel.values[s][k] + v_next[graph.successor(s, k)]);
        v[s] = best;
        auto& row = rows.rows[s];
        row.assign(n, 0.0);
        if (tie == TieBreak::LowestIndex) {
            for (int k = 0; k < n; ++k) {
                if (kernel.values[s][k] + v_next[graph.successor(s, k)] == best) {
                    row[k] = 1.0;
                    break;
                }
            }
        } else {
            int count = 0;
            for (int k = 0; k < n; ++k)
                if (kernel.values[s][k] + v_next[graph.successor(s, k)] == best) ++count;
            for (int k = 0; k < n; ++k)
                if (kernel.values[s][k] + v_next[graph.successor(s, k)] == best)
                    row[k] = 1.0 / count;
        }
    }
    return {std::move(v), std::move(rows)};
}

namespace {

DensityVector initial_density(const StateSpace& space, bool uniform_ingress) {
    DensityVector theta(space.size(), 0.0);
    if (uniform_ingress) {
        for (int node = 0; node < space.nodes; ++node)
            theta[space.state_of(0, node)] = 1.0 / space.nodes;
    } else {
        theta[space.source()] = 1.0;
    }
    return theta;
}

int effective_horizon(const StateSpace& space, int horizon) {
    if (horizon <= 0) return space.levels;
    if (horizon < space.levels)
        throw std::invalid_argument("horizon must be at least the chain length");
    return horizon;
}

struct Sweeps {
    std::vector<ValueVector> v_traj;        // [t][state], t = 0..H
    std::vector<TransitionMatrix> p_traj;   // [t], t = 0..H-1
    std::vector<DensityVector> theta_traj;  // stored until mass is terminal
};

Sweeps sweep_chain(const StateSpace& space, const Digraph& graph, const RewardKernel& kernel,
                   int horizon, TieBreak tie, bool uniform_ingress) {
    Sweeps out;
    const int H = horizon;
    out.v_traj.assign(H + 1, ValueVector(space.size(), 0.0));
    out.p_traj.resize(H);
    for (int t = H - 1; t >= 0; --t) {
        auto [v, rows] = hjb_backstep(graph, kernel, out.v_traj[t + 1], tie);
        out.v_traj[t] = std::move(v);
        out.p_traj[t] = std::move(rows);
    }
    // Forward pass; the walk needs `levels` steps from the source (one less
    // when the density starts at the ingress level), after which every level
    // has been visited exactly once.
    const int steps = uniform_ingress ? space.levels - 1 : space.levels;
    out.theta_traj.push_back(initial_density(space, uniform_ingress));
    for (int t = 0; t < steps; ++t)
        out.theta_traj.push_back(fpk_step(graph, out.theta_traj.back(), out.p_traj[t]));
    return out;
}

double max_abs_diff(const std::vector<DensityVector>& a, const std::vector<DensityVector>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            m = std::max(m, std::abs(a[i][j] - b[i][j]));
    return m;
}

double kernel_diff(const std::vector<RewardKernel>& a, const std::vector<RewardKernel>& b) {
    double m = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c)
        for (std::size_t s = 0; s < a[c].values.size(); ++s)
            for (std::size_t k = 0; k < a[c].values[s].size(); ++k)
                m = std::max(m, std::abs(a[c].values[s][k] - b[c].values[s][k]));
    return m;
}

}  // namespace

MfgSolution solve_mfg(const Scenario& scenario, const std::vector<StateSpace>& spaces,
                      const SolveOptions& options) {
    if (options.tol <= 0.0) throw std::invalid_argument("tol must be > 0");
    if (options.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

    const std::size_t C = spaces.size();
    std::vector<Digraph> graphs(C);
    std::vector<int> horizons(C);
    for (std::size_t c = 0; c < C; ++c) {
        graphs[c] = spaces[c].graph();
        horizons[c] = effective_horizon(spaces[c], options.horizon);
    }

    // Bootstrap density trajectories from uniform rows.
    std::vector<std::vector<DensityVector>> theta(C);
    for (std::size_t c = 0; c < C; ++c) {
        const auto uniform = TransitionMatrix::uniform(graphs[c]);
        const int steps = options.uniform_ingress_init ? spaces[c].levels - 1 : spaces[c].levels;
        theta[c].push_back(initial_density(spaces[c], options.uniform_ingress_init));
        for (int t = 0; t < steps; ++t)
            theta[c].push_back(fpk_step(graphs[c], theta[c].back(), uniform));
    }

    auto kernels_at = [&](const std::vector<std::vector<DensityVector>>& traj) {
        std::vector<RewardKernel> kernels(C);
        if (options.kernel.congestion) {
            const auto loads = projected_loads(scenario, spaces, traj);
            for (std::size_t c = 0; c < C; ++c)
                kernels[c] = make_kernel(scenario, spaces[c], loads, options.kernel);
        } else {
            for (std::size_t c = 0; c < C; ++c)
                kernels[c] = make_kernel_free(scenario, spaces[c], options.kernel);
        }
        return kernels;
    };

    MfgSolution solution;
    solution.chains.resize(C);

    std::vector<std::vector<ValueVector>> prev_v(C);
    bool have_prev = false;
    std::vector<RewardKernel> kernels = kernels_at(theta);

    for (int iter = 1; iter <= options.max_iters; ++iter) {
        solution.iterations = iter;

        std::vector<Sweeps> sweeps(C);
        for (std::size_t c = 0; c < C; ++c)
            sweeps[c] = sweep_chain(spaces[c], graphs[c], kernels[c], horizons[c], options.tie,
                                    options.uniform_ingress_init);

        // Damped density update.
        std::vector<std::vector<DensityVector>> theta_new(C);
        for (std::size_t c = 0; c < C; ++c) {
            theta_new[c] = sweeps[c].theta_traj;
            for (std::size_t t = 0; t < theta_new[c].size(); ++t)
                for (std::size_t s = 0; s < theta_new[c][t].size(); ++s)
                    theta_new[c][t][s] = (1.0 - options.damping) * theta[c][t][s] +
                                         options.damping * theta_new[c][t][s];
        }

        double residual = 0.0;
        for (std::size_t c = 0; c < C; ++c) {
            residual = std::max(residual, max_abs_diff(theta_new[c], theta[c]));
            if (have_prev)
                residual = std::max(residual, max_abs_diff(sweeps[c].v_traj, prev_v[c]));
        }
        solution.residual = residual;

        for (std::size_t c = 0; c < C; ++c) prev_v[c] = sweeps[c].v_traj;
        have_prev = true;
        theta = std::move(theta_new);

        // Fixed point reached when the kernel the new density induces matches
        // the one just used (exact for density-independent kernels), or when
        // both trajectories stopped moving.
        auto kernels_next = kernels_at(theta);
        const double k_delta = kernel_diff(kernels, kernels_next);
        kernels = std::move(kernels_next);
        solution.trace.emplace_back(residual, k_delta);
        if (k_delta < options.tol || (iter >= 2 && residual < options.tol)) {
            solution.converged = true;
            break;
        }
    }

    // Final undamped pass at the converged density so the reported rows are
    // exact maximizers of the reported kernel and theta satisfies the forward
    // recursion of the reported rows.
    for (std::size_t c = 0; c < C; ++c) {
        Sweeps s = sweep_chain(spaces[c], graphs[c], kernels[c], horizons[c], options.tie,
                               options.uniform_ingress_init);
        solution.chains[c].v_traj = std::move(s.v_traj);
        solution.chains[c].p_traj = std::move(s.p_traj);
        solution.chains[c].theta_traj = std::move(s.theta_traj);
    }
    {
        std::vector<std::vector<DensityVector>> final_theta(C);
        for (std::size_t c = 0; c < C; ++c) final_theta[c] = solution.chains[c].theta_traj;
        solution.loads = projected_loads(scenario, spaces, final_theta);
    }
    return solution;
}

bool verify_nash(const Scenario& scenario, const std::vector<StateSpace>& spaces,
                 const MfgSolution& solution, const KernelParams& params, double epsilon) {
    for (std::size_t c = 0; c < spaces.size(); ++c) {
        const StateSpace& space = spaces[c];
        const Digraph graph = space.graph();
        const RewardKernel kernel =
            params.congestion ? make_kernel(scenario, space, solution.loads, params)
                              : make_kernel_free(scenario, space, params);
        const ChainSolution& chain = solution.chains[c];
        for (std::size_t t = 0; t < chain.p_traj.size(); ++t) {
            const ValueVector& v_next = chain.v_traj[t + 1];
            for (int s = 0; s < graph.size(); ++s) {
                const int n = graph.successor_count(s);
                if (n == 0) continue;
                const double mu_solution =
                    average_reward(graph, kernel, chain.p_traj[t], v_next, s);
                for (int k = 0; k < n; ++k) {
                    // Vertex deviation: row replaced by a point mass on k.
                    const double mu_dev = kernel.values[s][k] + v_next[graph.successor(s, k)];
                    if (mu_dev > mu_solution + epsilon) return false;
                }
            }
        }
    }
    return true;
}

void write_solution_csvs(const std::string& out_dir, const Scenario& scenario,
                         const std::vector<StateSpace>& spaces, const MfgSolution& solution,
                         const std::vector<std::pair<double, double>>& iteration_residuals) {
    namespace fs = std::filesystem;
    {
        CsvWriter csv((fs::path(out_dir) / "mfg_convergence.csv").string(),
                      {"iteration", "residual", "kernel_delta"});
        for (std::size_t i = 0; i < iteration_residuals.size(); ++i) {
            csv.field(static_cast<std::int64_t>(i + 1))
                .field(iteration_residuals[i].first)
                .field(iteration_residuals[i].second);
            csv.end_row();
        }
    }
    {
        CsvWriter csv((fs::path(out_dir) / "mfg_values.csv").string(),
                      {"chain", "t", "state", "level", "node", "vnf", "value", "density"});
        for (std::size_t c = 0; c < spaces.size(); ++c) {
            const StateSpace& space = spaces[c];
            const auto& chain_id = scenario.topology.chains[space.chain].id;
            const auto& seq = scenario.topology.chains[space.chain].vnf_sequence;
            const ChainSolution& chain = solution.chains[c];
            for (std::size_t t = 0; t < chain.v_traj.size(); ++t) {
                for (int s = 0; s < space.size(); ++s) {
                    const int level = space.level_of(s);
                    const int node = space.node_of(s);
                    const double density =
                        t < chain.theta_traj.size() ? chain.theta_traj[t][s] : 0.0;
                    csv.field(chain_id)
                        .field(static_cast<std::int64_t>(t))
                        .field(static_cast<std::int64_t>(s))
                        .field(static_cast<std::int64_t>(level))
                        .field(node < 0 ? std::string("-") : scenario.topology.nodes[node].id)
                        .field(level < 0 ? std::string("-") : seq[level])
                        .field(chain.v_traj[t][s])
                        .field(density);
                    csv.end_row();
                }
            }
        }
    }
    {
        CsvWriter csv((fs::path(out_dir) / "mfg_rows.csv").string(),
                      {"chain", "t", "state", "successor_node", "prob"});
        for (std::size_t c = 0; c < spaces.size(); ++c) {
            const StateSpace& space = spaces[c];
            const auto& chain_id = scenario.topology.chains[space.chain].id;
            const ChainSolution& chain = solution.chains[c];
            for (std::size_t t = 0; t < chain.p_traj.size(); ++t) {
                for (int s = 0; s < space.size(); ++s) {
                    const int n = space.successor_count(s);
                    for (int k = 0; k < n; ++k) {
                        csv.field(chain_id)
                            .field(static_cast<std::int64_t>(t))
                            .field(static_cast<std::int64_t>(s))
                            .field(scenario.topology.nodes[k].id)
                            .field(chain.p_traj[t].rows[s][k]);
                        csv.end_row();
                    }
                }
            }
        }
    }
}

}  // namespace sfcmfg::mfg
