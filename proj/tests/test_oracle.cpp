#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "sfcmfg/delay.hpp"
#include "sfcmfg/oracle.hpp"
#include "sfcmfg/rng.hpp"
#include "test_helpers.hpp"

using namespace sfcmfg;
using namespace sfcmfg::oracle;

TEST_CASE("optimal_placement: a single sufficient node colocates everything") {
    Scenario s;
    s.name = "one-node";
    s.topology.nodes.push_back({"n1", {10.0, 10.0, 10.0}, 1000.0});
    s.topology.vnfs.push_back({"A", {1.0, 1.0, 1.0}});
    s.topology.vnfs.push_back({"B", {1.0, 1.0, 1.0}});
    s.topology.chains.push_back({"C1", {"A", "B"}});
    s.workload = {100.0, 200.0, 1.0, 5, {"C1"}, {1.0}, {100.0}, 1};
    const auto best = optimal_placement(s, {100.0});
    CHECK(best.placement.node_of(0, 0) == 0);
    CHECK(best.placement.node_of(0, 1) == 0);
    // Pure processing: (1 + 1) * 100 / 1000.
    CHECK(best.objective_ms == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("optimal_placement: capacity-forced split picks the cheaper hop") {
    const auto scenario = make_template_scenario("split");
    const auto best = optimal_placement(scenario, {1.0e6});
    // Both splits have equal processing; the n1->n2 allocation is faster.
    CHECK(best.placement.node_of(0, 0) == 0);
    CHECK(best.placement.node_of(0, 1) == 1);
    CHECK(best.enumerated == 2);

    // Exhaustive check by hand over the two feasible splits.
    const auto& topo = scenario.topology;
    const double beta = 1.0e6;
    const double proc = (topo.vnfs[0].demand.compute + topo.vnfs[1].demand.compute) * beta /
                        topo.nodes[0].processing_capacity;
    const double split_01 = proc + topo.vnfs[0].demand.transmission * beta / 80000.0;
    const double split_10 = proc + topo.vnfs[0].demand.transmission * beta / 40000.0;
    CHECK(best.objective_ms == doctest::Approx(std::min(split_01, split_10)).epsilon(1e-12));
}

TEST_CASE("optimal_placement: objective is minimal over the full enumeration") {
    const auto scenario = testing::paper_scenario();
    const std::vector<double> grid = {1.0e6};
    const auto best = optimal_placement(scenario, grid);
    std::size_t seen = 0;
    enumerate_feasible_placements(scenario.topology, 100000, [&](const PlacementMatrix& p) {
        CHECK(best.objective_ms <= oracle_objective(scenario, p, grid) + 1e-12);
        ++seen;
        return true;
    });
    CHECK(seen == best.enumerated);
}

TEST_CASE("oracle_objective agrees with delay_model to 1e-12 relative") {
    const auto scenario = testing::paper_scenario();
    const auto& topo = scenario.topology;
    Rng rng(31337);
    const std::vector<double> grid = {1.0e5, 1.0e6, 2.0e6};
    int checked = 0;
    while (checked < 200) {
        PlacementMatrix placement = PlacementMatrix::empty_for(topo);
        for (std::size_t k = 0; k < topo.chains.size(); ++k)
            for (std::size_t p = 0; p < topo.chains[k].length(); ++p)
                placement.place(k, p, static_cast<int>(rng.uniform_index(3)));
        const double a = oracle_objective(scenario, placement, grid);
        const double b = grid_objective(topo, placement, grid);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)));
        ++checked;
    }
}

TEST_CASE("dp_values: single edge and two-hop chain") {
    mfg::Digraph g;
    g.successors = {{1}, {}};
    mfg::RewardKernel kernel;
    kernel.values = {{-2.5}, {}};
    auto values = dp_values(g, kernel);
    CHECK(values[0] == -2.5);
    CHECK(values[1] == 0.0);

    // Two levels of two nodes; best path by exhaustive enumeration.
    mfg::Digraph g2;
    g2.successors = {{1, 2}, {3, 4}, {3, 4}, {}, {}};
    mfg::RewardKernel k2;
    k2.values = {{1.0, 2.0}, {5.0, -1.0}, {0.5, 3.0}, {}, {}};
    const auto v2 = dp_values(g2, k2);
    double best = -1e300;
    for (int first = 0; first < 2; ++first)
        for (int second = 0; second < 2; ++second)
            best = std::max(best, k2.values[0][first] + k2.values[1 + first][second]);
    CHECK(v2[0] == best);  // = max(1+5, 1-1, 2+0.5, 2+3) = 6
    CHECK(v2[0] == 6.0);
}

TEST_CASE("dp_values: agrees with exhaustive path enumeration on random instances") {
    Rng rng(404);
    for (int trial = 0; trial < 30; ++trial) {
        const int levels = 2 + static_cast<int>(rng.uniform_index(3));
        const int width = 1 + static_cast<int>(rng.uniform_index(3));
        mfg::Digraph g;
        const int n = 1 + levels * width;
        g.successors.resize(n);
        auto state_of = [&](int level, int node) { return 1 + level * width + node; };
        for (int node = 0; node < width; ++node) g.successors[0].push_back(state_of(0, node));
        for (int level = 0; level + 1 < levels; ++level)
            for (int a = 0; a < width; ++a)
                for (int b = 0; b < width; ++b)
                    g.successors[state_of(level, a)].push_back(state_of(level + 1, b));
        mfg::RewardKernel kernel;
        kernel.values.resize(n);
        for (int s = 0; s < n; ++s) {
            kernel.values[s].resize(g.successor_count(s));
            for (auto& r : kernel.values[s]) r = rng.uniform(-10.0, 10.0);
        }
        const auto values = dp_values(g, kernel);

        // Exhaustive DFS over every source-to-terminal path (< 10^4 paths).
        double best = -1e300;
        auto dfs = [&](auto&& self, int s, double acc) -> void {
            if (g.successor_count(s) == 0) {
                best = std::max(best, acc);
                return;
            }
            for (int k = 0; k < g.successor_count(s); ++k)
                self(self, g.successor(s, k), acc + kernel.values[s][k]);
        };
        dfs(dfs, 0, 0.0);
        CHECK(values[0] == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("dp_values: rejects cyclic graphs") {
    mfg::Digraph g;
    g.successors = {{1}, {0}};
    mfg::RewardKernel kernel;
    kernel.values = {{1.0}, {1.0}};
    CHECK_THROWS_AS(dp_values(g, kernel), std::invalid_argument);
}

TEST_CASE("golden file round-trips") {
    const auto dir = std::filesystem::temp_directory_path() / "sfcmfg_golden_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "golden.json").string();
    GoldenRecord rec;
    rec.scenario_name = "paper";
    rec.scenario_hash = 0x0123456789abcdefull;
    rec.beta_grid = {1.0e6};
    rec.objective_ms = 123.456;
    save_golden_file(path, {rec});
    const auto loaded = load_golden_file(path);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].scenario_name == "paper");
    CHECK(loaded[0].scenario_hash == rec.scenario_hash);
    CHECK(loaded[0].objective_ms == rec.objective_ms);
    const auto found = find_golden(loaded, rec.scenario_hash);
    REQUIRE(found.has_value());
    CHECK_FALSE(find_golden(loaded, 42).has_value());
}
