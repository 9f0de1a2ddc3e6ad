#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "sfcmfg/delay.hpp"
#include "sfcmfg/mdp.hpp"
#include "sfcmfg/oracle.hpp"
#include "test_helpers.hpp"

using namespace sfcmfg;
using namespace sfcmfg::rl;

namespace {

RlConfig quick_config(int episodes, std::uint64_t seed = 0) {
    RlConfig config;
    config.episodes = episodes;
    config.seed = seed;
    config.kernel.congestion = false;
    return config;
}

}  // namespace

TEST_CASE("mdp_reward: single-VNF chain with a deterministic row") {
    const auto scenario = make_template_scenario("tiny");
    const auto spaces = mfg::build_state_spaces(scenario);
    const auto& space = spaces[0];
    const auto graph = space.graph();
    const auto kernel = mfg::make_kernel_free(scenario, space, {});
    mfg::TransitionMatrix point;
    point.rows = {{1.0}, {}};
    mfg::DensityVector density = {1.0, 0.0};  // mass at the source
    CHECK(mdp_reward(graph, density, point, kernel) == kernel.values[0][0]);
}

TEST_CASE("mdp_reward: zero kernel gives zero") {
    const auto scenario = testing::paper_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    const auto graph = spaces[0].graph();
    mfg::RewardKernel zero;
    zero.values.resize(graph.size());
    for (int s = 0; s < graph.size(); ++s) zero.values[s].assign(graph.successor_count(s), 0.0);
    const auto uniform = mfg::TransitionMatrix::uniform(graph);
    mfg::DensityVector density(graph.size(), 1.0);
    CHECK(mdp_reward(graph, density, uniform, zero) == 0.0);
}

TEST_CASE("mdp_reward: uniform rows against a hand-computed double sum") {
    const auto scenario = testing::paper_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    const auto& space = spaces[1];
    const auto graph = space.graph();
    const auto kernel = mfg::make_kernel_free(scenario, space, {});
    const auto uniform = mfg::TransitionMatrix::uniform(graph);
    mfg::DensityVector density(graph.size(), 1.0);  // unit mass per state
    // Literal double sum over states and successors.
    double expected = 0.0;
    for (int s = 0; s < graph.size(); ++s)
        for (int k = 0; k < graph.successor_count(s); ++k)
            expected += kernel.values[s][k] / graph.successor_count(s);
    CHECK(mdp_reward(graph, density, uniform, kernel) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("run_episode: TD errors are exactly r + V(next) - V(state)") {
    const auto scenario = make_template_scenario("tiny");
    const auto spaces = mfg::build_state_spaces(scenario);
    const auto kernel = mfg::make_kernel_free(scenario, spaces[0], {});
    std::vector<mfg::TransitionMatrix> decoded = {mfg::TransitionMatrix{{{1.0}, {}}}};
    Critic critic = Critic::zeros(spaces);
    critic.values[0][0] = 1.25;  // source
    critic.values[0][1] = -0.5;  // placement state
    Rng rng(3);
    const auto visits = run_episode(spaces, decoded, {kernel}, critic, rng);
    REQUIRE(visits.size() == 1);
    CHECK(visits[0].reward == kernel.values[0][0]);
    CHECK(visits[0].td_error == kernel.values[0][0] + (-0.5) - 1.25);
}

TEST_CASE("run_episode: zero kernel and zero critic give zero TD errors") {
    const auto scenario = testing::paper_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    std::vector<mfg::RewardKernel> kernels(spaces.size());
    std::vector<mfg::TransitionMatrix> decoded(spaces.size());
    for (std::size_t c = 0; c < spaces.size(); ++c) {
        const auto graph = spaces[c].graph();
        kernels[c].values.resize(graph.size());
        for (int s = 0; s < graph.size(); ++s)
            kernels[c].values[s].assign(graph.successor_count(s), 0.0);
        decoded[c] = mfg::TransitionMatrix::uniform(graph);
    }
    const Critic critic = Critic::zeros(spaces);
    Rng rng(17);
    for (const auto& visit : run_episode(spaces, decoded, kernels, critic, rng)) {
        CHECK(visit.reward == 0.0);
        CHECK(visit.td_error == 0.0);
    }
}

TEST_CASE("run_episode: identical traces under a fixed seed") {
    const auto scenario = testing::paper_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    std::vector<mfg::RewardKernel> kernels(spaces.size());
    std::vector<mfg::TransitionMatrix> decoded(spaces.size());
    for (std::size_t c = 0; c < spaces.size(); ++c) {
        kernels[c] = mfg::make_kernel_free(scenario, spaces[c], {});
        decoded[c] = mfg::TransitionMatrix::uniform(spaces[c].graph());
    }
    const Critic critic = Critic::zeros(spaces);
    Rng rng_a(99), rng_b(99);
    const auto a = run_episode(spaces, decoded, kernels, critic, rng_a);
    const auto b = run_episode(spaces, decoded, kernels, critic, rng_b);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].state == b[i].state);
        CHECK(a[i].successor_k == b[i].successor_k);
        CHECK(a[i].reward == b[i].reward);
    }
}

TEST_CASE("train: one episode yields one log entry") {
    const auto scenario = make_template_scenario("tiny");
    const auto spaces = mfg::build_state_spaces(scenario);
    const auto result = train(scenario, spaces, quick_config(1));
    CHECK(result.log.entries.size() == 1);
    CHECK_FALSE(result.log.diverged);
}

TEST_CASE("train: zero actor learning rate leaves the policy constant") {
    const auto scenario = testing::paper_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    auto config = quick_config(50, 5);
    config.actor_lr = 0.0;
    const auto result = train(scenario, spaces, config);
    for (const auto& chain : result.policy.weights)
        for (const auto& row : chain)
            for (double w : row) CHECK(w == 0.0);
}

TEST_CASE("train: decoded rows stay stochastic after every update") {
    const auto scenario = testing::paper_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    auto config = quick_config(100, 2);
    config.kernel.congestion = true;
    int observed = 0;
    const auto result = train(scenario, spaces, config,
                              [&](int, const Policy&, const Critic&,
                                  const std::vector<mfg::TransitionMatrix>& decoded) {
                                  for (std::size_t c = 0; c < spaces.size(); ++c)
                                      require_stochastic(spaces[c].graph(), decoded[c]);
                                  ++observed;
                              });
    CHECK(observed == 100);
    CHECK(result.log.entries.size() == 100);
}

TEST_CASE("train: divergence guard aborts with a diagnostic") {
    const auto scenario = testing::paper_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    auto config = quick_config(50, 1);
    config.value_bound = 1e-3;  // everything trips this
    CHECK_THROWS_AS(train(scenario, spaces, config), EvaluationError);
}

TEST_CASE("train: determinism of the full training log") {
    const auto scenario = testing::paper_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    const auto a = train(scenario, spaces, quick_config(100, 11));
    const auto b = train(scenario, spaces, quick_config(100, 11));
    REQUIRE(a.log.entries.size() == b.log.entries.size());
    for (std::size_t i = 0; i < a.log.entries.size(); ++i) {
        CHECK(a.log.entries[i].sampled_reward == b.log.entries[i].sampled_reward);
        CHECK(a.log.entries[i].greedy_delay_ms == b.log.entries[i].greedy_delay_ms);
    }
}

TEST_CASE("extract_placement: a point-mass policy decodes its own walk") {
    const auto scenario = testing::hand_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    Policy policy = Policy::zeros(spaces);
    // Source -> node 1, then node 1 -> node 0.
    policy.weights[0][0] = {0.0, 50.0};
    policy.weights[0][spaces[0].state_of(0, 1)] = {50.0, 0.0};
    const auto placement =
        extract_placement(scenario, spaces, policy, quick_config(1));
    CHECK(placement.node_of(0, 0) == 1);
    CHECK(placement.node_of(0, 1) == 0);
}

TEST_CASE("extract_placement: uniform policy ties break to the lexicographically first node") {
    const auto scenario = testing::hand_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    const Policy policy = Policy::zeros(spaces);
    const auto placement = extract_placement(scenario, spaces, policy, quick_config(1));
    CHECK(placement.node_of(0, 0) == 0);
    CHECK(placement.node_of(0, 1) == 0);
}

TEST_CASE("extract_placement: capacity fallback picks the best feasible successor") {
    // One of the two nodes is too small for the second VNF.
    Scenario s;
    s.name = "fallback";
    s.topology.nodes.push_back({"n1", {1.0, 1.0, 1.0}, 1000.0});
    s.topology.nodes.push_back({"n2", {1.0, 1.0, 1.0}, 1000.0});
    s.topology.vnfs.push_back({"A", {0.6, 0.1, 0.1}});
    s.topology.vnfs.push_back({"B", {0.6, 0.1, 0.1}});
    s.topology.chains.push_back({"C1", {"A", "B"}});
    s.topology.links.push_back({"n1", "n2", 1000.0, {{"A", "B", 500.0}}});
    s.topology.links.push_back({"n2", "n1", 1000.0, {{"A", "B", 500.0}}});
    s.workload = {100.0, 200.0, 1.0, 5, {"C1"}, {1.0}, {100.0}, 1};
    const auto spaces = mfg::build_state_spaces(s);
    const Policy policy = Policy::zeros(spaces);  // greedy would colocate on n1
    const auto placement = extract_placement(s, spaces, policy, quick_config(1));
    CHECK(placement.node_of(0, 0) == 0);
    CHECK(placement.node_of(0, 1) == 1);  // forced to the other node
}

TEST_CASE("extract_placement: over-constrained scenarios raise an error") {
    Scenario s;
    s.name = "overfull";
    s.topology.nodes.push_back({"n1", {1.0, 1.0, 1.0}, 1000.0});
    s.topology.vnfs.push_back({"A", {0.6, 0.1, 0.1}});
    s.topology.vnfs.push_back({"B", {0.6, 0.1, 0.1}});
    s.topology.chains.push_back({"C1", {"A", "B"}});
    s.workload = {100.0, 200.0, 1.0, 5, {"C1"}, {1.0}, {100.0}, 1};
    const auto spaces = mfg::build_state_spaces(s);
    const Policy policy = Policy::zeros(spaces);
    CHECK_THROWS_AS(extract_placement(s, spaces, policy, quick_config(1)), EvaluationError);
}

TEST_CASE("train: converged greedy decode equals the DP shortest path for a free kernel") {
    const auto scenario = testing::hand_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    auto config = quick_config(800, 4);
    config.temperature_end = 0.05;
    const auto result = train(scenario, spaces, config);
    const auto placement = extract_placement(scenario, spaces, result.policy, config);

    // Independent DP walk: argmax of r + V over successors, by the oracle.
    const auto& space = spaces[0];
    const auto graph = space.graph();
    const auto kernel = mfg::make_kernel_free(scenario, space, config.kernel);
    const auto dp = oracle::dp_values(graph, kernel);
    int s = space.source();
    std::vector<int> dp_nodes;
    while (graph.successor_count(s) > 0) {
        int best = 0;
        for (int k = 1; k < graph.successor_count(s); ++k)
            if (kernel.values[s][k] + dp[graph.successor(s, k)] >
                kernel.values[s][best] + dp[graph.successor(s, best)])
                best = k;
        dp_nodes.push_back(best);
        s = graph.successor(s, best);
    }
    REQUIRE(dp_nodes.size() == 2);
    CHECK(placement.node_of(0, 0) == dp_nodes[0]);
    CHECK(placement.node_of(0, 1) == dp_nodes[1]);
}

TEST_CASE("train: the final log entry matches the returned artifacts' decode") {
    const auto scenario = testing::paper_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    auto config = quick_config(200, 6);
    config.kernel.congestion = true;
    const auto result = train(scenario, spaces, config);
    const auto placement = extract_placement(scenario, spaces, result.policy, config);
    const double objective =
        grid_objective(scenario.topology, placement, {config.kernel.beta_ref});
    CHECK(objective == result.log.entries.back().greedy_delay_ms);
}

TEST_CASE("policy snapshot: save and reload round-trips") {
    const auto scenario = testing::paper_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    const auto result = train(scenario, spaces, quick_config(20, 8));
    const auto dir = std::filesystem::temp_directory_path() / "sfcmfg_policy_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "policy.txt").string();
    save_policy(path, spaces, result.policy);
    const auto loaded = load_policy(path, spaces);
    CHECK(loaded.weights == result.policy.weights);
}

TEST_CASE("equivalence hook: DP oracle values equal the MFG values for free kernels") {
    const auto scenario = testing::paper_scenario();
    const auto spaces = mfg::build_state_spaces(scenario);
    mfg::SolveOptions options;
    options.kernel.congestion = false;
    const auto solution = mfg::solve_mfg(scenario, spaces, options);
    REQUIRE(solution.converged);
    for (std::size_t c = 0; c < spaces.size(); ++c) {
        const auto kernel = mfg::make_kernel_free(scenario, spaces[c], options.kernel);
        const auto dp = oracle::dp_values(spaces[c].graph(), kernel);
        for (int s = 0; s < spaces[c].size(); ++s)
            CHECK(std::abs(dp[s] - solution.chains[c].v_traj[0][s]) <= 1e-9);
    }
}
