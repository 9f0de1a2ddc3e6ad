#include "sfcmfg/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sfcmfg/csv.hpp"
#include "sfcmfg/delay.hpp"

namespace sfcmfg::rl {

Policy Policy::zeros(const std::vector<mfg::StateSpace>& spaces) {
    Policy policy;
    policy.weights.resize(spaces.size());
    for (std::size_t c = 0; c < spaces.size(); ++c) {
        const auto& space = spaces[c];
        policy.weights[c].resize(space.size());
        for (int s = 0; s < space.size(); ++s)
            policy.weights[c][s].assign(space.successor_count(s), 0.0);
    }
    return policy;
}

mfg::TransitionMatrix Policy::decode(const mfg::StateSpace& space, std::size_t chain,
                                     double temperature) const {
    if (temperature <= 0.0) throw std::invalid_argument("temperature must be > 0");
    mfg::TransitionMatrix matrix;
    matrix.rows.resize(space.size());
    for (int s = 0; s < space.size(); ++s) {
        const int n = space.successor_count(s);
        if (n == 0) continue;
        const auto& w = weights[chain][s];
        double max_w = *std::max_element(w.begin(), w.end());
        auto& row = matrix.rows[s];
        row.resize(n);
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
            row[k] = std::exp((w[k] - max_w) / temperature);
            sum += row[k];
        }
        for (int k = 0; k < n; ++k) row[k] /= sum;
    }
    return matrix;
}

Critic Critic::zeros(const std::vector<mfg::StateSpace>& spaces) {
    Critic critic;
    critic.values.resize(spaces.size());
    for (std::size_t c = 0; c < spaces.size(); ++c)
        critic.values[c].assign(spaces[c].size(), 0.0);
    return critic;
}

double mdp_reward(const mfg::Digraph& graph, const mfg::DensityVector& density,
                  const mfg::TransitionMatrix& matrix, const mfg::RewardKernel& kernel) {
    if (density.size() != static_cast<std::size_t>(graph.size()))
        throw std::invalid_argument("density size does not match state space");
    double total = 0.0;
    for (int s = 0; s < graph.size(); ++s) {
        if (graph.successor_count(s) == 0 || density[s] == 0.0) continue;
        total += density[s] * mfg::expected_reward(graph, kernel, matrix, s);
    }
    return total;
}

namespace {

struct WalkEdge {
    std::size_t chain;
    int state;
    int successor_k;
    double reward;
};

// One sampled source-to-egress walk per chain.
std::vector<WalkEdge> sample_walks(const std::vector<mfg::StateSpace>& spaces,
                                   const std::vector<mfg::TransitionMatrix>& decoded,
                                   const std::vector<mfg::RewardKernel>& kernels, Rng& rng) {
    std::vector<WalkEdge> edges;
    for (std::size_t c = 0; c < spaces.size(); ++c) {
        const auto& space = spaces[c];
        int s = space.source();
        while (space.successor_count(s) > 0) {
            const auto& row = decoded[c].rows[s];
            const int k = static_cast<int>(rng.discrete(row));
            edges.push_back({c, s, k, kernels[c].values[s][k]});
            s = space.successor(s, k);
        }
    }
    return edges;
}

// Density trajectories induced by the decoded policy (mass starts at each
// source), feeding the mean-field load projection.
std::vector<std::vector<mfg::DensityVector>> policy_densities(
    const std::vector<mfg::StateSpace>& spaces,
    const std::vector<mfg::TransitionMatrix>& decoded) {
    std::vector<std::vector<mfg::DensityVector>> traj(spaces.size());
    for (std::size_t c = 0; c < spaces.size(); ++c) {
        const auto& space = spaces[c];
        const mfg::Digraph graph = space.graph();
        mfg::DensityVector theta(space.size(), 0.0);
        theta[space.source()] = 1.0;
        traj[c].push_back(theta);
        for (int t = 0; t < space.levels; ++t)
            traj[c].push_back(mfg::fpk_step(graph, traj[c].back(), decoded[c]));
    }
    return traj;
}

std::vector<mfg::RewardKernel> kernels_for(const Scenario& scenario,
                                           const std::vector<mfg::StateSpace>& spaces,
                                           const std::vector<mfg::TransitionMatrix>& decoded,
                                           const mfg::KernelParams& params) {
    std::vector<mfg::RewardKernel> kernels(spaces.size());
    if (params.congestion) {
        const auto loads = mfg::projected_loads(scenario, spaces, policy_densities(spaces, decoded));
        for (std::size_t c = 0; c < spaces.size(); ++c)
            kernels[c] = mfg::make_kernel(scenario, spaces[c], loads, params);
    } else {
        for (std::size_t c = 0; c < spaces.size(); ++c)
            kernels[c] = mfg::make_kernel_free(scenario, spaces[c], params);
    }
    return kernels;
}

double schedule_temperature(const RlConfig& config, int episode) {
    if (config.episodes <= 1) return config.temperature_start;
    const double f = static_cast<double>(episode) / (config.episodes - 1);
    return config.temperature_start + f * (config.temperature_end - config.temperature_start);
}

struct GreedyWalkResult {
    PlacementMatrix placement;
    double total_reward = 0.0;
    std::vector<std::vector<double>> vnf_rewards;  // [chain][position]
};

// Greedy argmax decode with per-step capacity repair; shared by the episode
// log and extract_placement.
GreedyWalkResult greedy_decode(const Scenario& scenario, const std::vector<mfg::StateSpace>& spaces,
                               const std::vector<mfg::TransitionMatrix>& decoded,
                               const std::vector<mfg::RewardKernel>& kernels) {
    const Topology& topo = scenario.topology;
    GreedyWalkResult result;
    result.placement = PlacementMatrix::empty_for(topo);
    result.vnf_rewards.resize(spaces.size());

    std::vector<ResourceVector> loads(topo.nodes.size());
    for (std::size_t c = 0; c < spaces.size(); ++c) {
        const auto& space = spaces[c];
        const auto vnf_idx = topo.chain_vnf_indices(space.chain);
        int s = space.source();
        while (space.successor_count(s) > 0) {
            const auto& row = decoded[c].rows[s];
            const int n = space.successor_count(s);

            auto fits = [&](int k) {
                const int node = space.node_of(space.successor(s, k));
                const int level = space.level_of(space.successor(s, k));
                const ResourceVector& demand = topo.vnfs[vnf_idx[level]].demand;
                return (loads[node] + demand).fits_within(topo.nodes[node].capacity);
            };

            int pick = 0;
            for (int k = 1; k < n; ++k)
                if (row[k] > row[pick]) pick = k;
            if (!fits(pick)) {
                // Fall back to the best feasible successor by edge reward.
                int best = -1;
                for (int k = 0; k < n; ++k) {
                    if (!fits(k)) continue;
                    if (best < 0 || kernels[c].values[s][k] > kernels[c].values[s][best]) best = k;
                }
                if (best < 0)
                    throw EvaluationError("decode: no capacity-feasible successor for chain " +
                                          topo.chains[space.chain].id);
                pick = best;
            }

            const int target = space.successor(s, pick);
            const int level = space.level_of(target);
            const int node = space.node_of(target);
            loads[node] += topo.vnfs[vnf_idx[level]].demand;
            result.placement.place(space.chain, static_cast<std::size_t>(level), node);
            result.total_reward += kernels[c].values[s][pick];
            result.vnf_rewards[c].push_back(kernels[c].values[s][pick]);
            s = target;
        }
    }
    return result;
}

}  // namespace

std::vector<EdgeVisit> run_episode(const std::vector<mfg::StateSpace>& spaces,
                                   const std::vector<mfg::TransitionMatrix>& decoded,
                                   const std::vector<mfg::RewardKernel>& kernels,
                                   const Critic& critic, Rng& rng) {
    for (std::size_t c = 0; c < spaces.size(); ++c)
        mfg::require_stochastic(spaces[c].graph(), decoded[c]);
    std::vector<EdgeVisit> visits;
    for (const auto& edge : sample_walks(spaces, decoded, kernels, rng)) {
        EdgeVisit v;
        v.chain = edge.chain;
        v.state = edge.state;
        v.successor_k = edge.successor_k;
        v.reward = edge.reward;
        const int target = spaces[edge.chain].successor(edge.state, edge.successor_k);
        v.td_error = edge.reward + critic.values[edge.chain][target] -
                     critic.values[edge.chain][edge.state];
        visits.push_back(v);
    }
    return visits;
}

TrainResult train(const Scenario& scenario, const std::vector<mfg::StateSpace>& spaces,
                  const RlConfig& config, const EpisodeObserver& observer) {
    if (config.episodes < 1) throw std::invalid_argument("episodes must be >= 1");
    if (config.actor_lr < 0.0 || config.critic_lr < 0.0)
        throw std::invalid_argument("learning rates must be >= 0");

    TrainResult result;
    result.policy = Policy::zeros(spaces);
    result.critic = Critic::zeros(spaces);
    Rng rng(config.seed);

    const std::vector<double> beta_grid = {config.kernel.beta_ref};

    for (int e = 0; e < config.episodes; ++e) {
        const double temperature = schedule_temperature(config, e);

        std::vector<mfg::TransitionMatrix> decoded(spaces.size());
        for (std::size_t c = 0; c < spaces.size(); ++c)
            decoded[c] = result.policy.decode(spaces[c], c, temperature);
        auto kernels = kernels_for(scenario, spaces, decoded, config.kernel);

        // Sample one walk per chain, then update along visited edges. States
        // never repeat inside an episode, so the online TD errors equal the
        // pre-update ones.
        double sampled_reward = 0.0;
        for (const auto& edge : sample_walks(spaces, decoded, kernels, rng)) {
            sampled_reward += edge.reward;
            const int target = spaces[edge.chain].successor(edge.state, edge.successor_k);
            auto& v = result.critic.values[edge.chain];
            const double td = edge.reward + v[target] - v[edge.state];
            v[edge.state] += config.critic_lr * td;
            result.policy.weights[edge.chain][edge.state][edge.successor_k] +=
                config.actor_lr * td;
            if (std::abs(v[edge.state]) > config.value_bound) {
                result.log.diverged = true;
                throw EvaluationError("critic diverged at episode " + std::to_string(e) +
                                      ": |V| exceeded " + format_double(config.value_bound));
            }
        }

        // Log the greedy decode under the post-update policy so the final
        // entry matches extract_placement on the returned artifacts.
        std::vector<mfg::TransitionMatrix> greedy_rows(spaces.size());
        for (std::size_t c = 0; c < spaces.size(); ++c)
            greedy_rows[c] = result.policy.decode(spaces[c], c, temperature);
        auto greedy_kernels = kernels_for(scenario, spaces, greedy_rows, config.kernel);
        const auto greedy = greedy_decode(scenario, spaces, greedy_rows, greedy_kernels);

        EpisodeEntry entry;
        entry.episode = e;
        entry.sampled_reward = sampled_reward;
        entry.greedy_reward = greedy.total_reward;
        entry.greedy_delay_ms =
            grid_objective(scenario.topology, greedy.placement, beta_grid);
        entry.temperature = temperature;
        entry.vnf_rewards = greedy.vnf_rewards;
        result.log.entries.push_back(std::move(entry));

        if (observer) observer(e, result.policy, result.critic, greedy_rows);
    }
    return result;
}

PlacementMatrix extract_placement(const Scenario& scenario,
                                  const std::vector<mfg::StateSpace>& spaces,
                                  const std::vector<mfg::TransitionMatrix>& decoded,
                                  const std::vector<mfg::RewardKernel>& kernels) {
    return greedy_decode(scenario, spaces, decoded, kernels).placement;
}

PlacementMatrix extract_placement(const Scenario& scenario,
                                  const std::vector<mfg::StateSpace>& spaces,
                                  const Policy& policy, const RlConfig& config) {
    std::vector<mfg::TransitionMatrix> decoded(spaces.size());
    for (std::size_t c = 0; c < spaces.size(); ++c)
        decoded[c] = policy.decode(spaces[c], c, config.temperature_end);
    auto kernels = kernels_for(scenario, spaces, decoded, config.kernel);
    return extract_placement(scenario, spaces, decoded, kernels);
}

PlacementMatrix decode_mfg_solution(const Scenario& scenario,
                                    const std::vector<mfg::StateSpace>& spaces,
                                    const mfg::MfgSolution& solution,
                                    const mfg::KernelParams& params) {
    std::vector<mfg::TransitionMatrix> rows(spaces.size());
    std::vector<mfg::RewardKernel> kernels(spaces.size());
    for (std::size_t c = 0; c < spaces.size(); ++c) {
        // Row of each state at the time step the source-anchored walk
        // reaches it.
        mfg::TransitionMatrix stitched;
        stitched.rows.resize(spaces[c].size());
        for (int s = 0; s < spaces[c].size(); ++s) {
            if (spaces[c].successor_count(s) == 0) continue;
            const std::size_t t = static_cast<std::size_t>(spaces[c].level_of(s) + 1);
            stitched.rows[s] = solution.chains[c].p_traj.at(t).rows[s];
        }
        rows[c] = std::move(stitched);
        kernels[c] = params.congestion
                         ? mfg::make_kernel(scenario, spaces[c], solution.loads, params)
                         : mfg::make_kernel_free(scenario, spaces[c], params);
    }
    return extract_placement(scenario, spaces, rows, kernels);
}

void save_policy(const std::string& path, const std::vector<mfg::StateSpace>& spaces,
                 const Policy& policy) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write policy file: " + path);
    out << "sfcmfg-policy 1\n";
    for (std::size_t c = 0; c < spaces.size(); ++c) {
        out << "chain " << c << ' ' << spaces[c].levels << ' ' << spaces[c].nodes << '\n';
        for (int s = 0; s < spaces[c].size(); ++s) {
            const auto& w = policy.weights[c][s];
            out << "w " << s;
            for (double x : w) out << ' ' << format_double(x);
            out << '\n';
        }
    }
}

Policy load_policy(const std::string& path, const std::vector<mfg::StateSpace>& spaces) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open policy file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "sfcmfg-policy 1")
        throw ScenarioError("policy file: bad header in " + path);

    Policy policy = Policy::zeros(spaces);
    std::size_t chain = SIZE_MAX;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "chain") {
            std::size_t c;
            int levels, nodes;
            if (!(ls >> c >> levels >> nodes) || c >= spaces.size() ||
                levels != spaces[c].levels || nodes != spaces[c].nodes)
                throw ScenarioError("policy file: chain header mismatch in " + path);
            chain = c;
        } else if (tag == "w") {
            if (chain == SIZE_MAX) throw ScenarioError("policy file: weights before chain header");
            int s;
            if (!(ls >> s) || s < 0 || s >= spaces[chain].size())
                throw ScenarioError("policy file: state out of range");
            for (auto& x : policy.weights[chain][s])
                if (!(ls >> x)) throw ScenarioError("policy file: truncated weight row");
            double extra;
            if (ls >> extra) throw ScenarioError("policy file: oversized weight row");
        } else {
            throw ScenarioError("policy file: unknown record '" + tag + "'");
        }
    }
    return policy;
}

void write_training_csv(const std::string& path, const TrainingLog& log) {
    CsvWriter csv(path,
                  {"episode", "sampled_reward", "greedy_reward", "greedy_delay_ms", "temperature"});
    for (const auto& e : log.entries) {
        csv.field(static_cast<std::int64_t>(e.episode))
            .field(e.sampled_reward)
            .field(e.greedy_reward)
            .field(e.greedy_delay_ms)
            .field(e.temperature);
        csv.end_row();
    }
}

void write_vnf_rewards_csv(const std::string& path, const Scenario& scenario,
                           const TrainingLog& log) {
    CsvWriter csv(path, {"episode", "chain", "position", "vnf", "reward"});
    for (const auto& e : log.entries) {
        for (std::size_t c = 0; c < e.vnf_rewards.size(); ++c) {
            const auto& chain = scenario.topology.chains[c];
            for (std::size_t p = 0; p < e.vnf_rewards[c].size(); ++p) {
                csv.field(static_cast<std::int64_t>(e.episode))
                    .field(chain.id)
                    .field(static_cast<std::int64_t>(p))
                    .field(chain.vnf_sequence[p])
                    .field(e.vnf_rewards[c][p]);
                csv.end_row();
            }
        }
    }
}

}  // namespace sfcmfg::rl
