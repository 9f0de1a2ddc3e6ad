#include "sfcmfg/oracle.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace sfcmfg::oracle {

using nlohmann::json;

double oracle_objective(const Scenario& scenario, const PlacementMatrix& placement,
                        const std::vector<double>& beta_grid) {
    const Topology& topo = scenario.topology;
    double total = 0.0;
    for (std::size_t k = 0; k < topo.chains.size(); ++k) {
        const auto& seq = topo.chains[k].vnf_sequence;
        for (double beta : beta_grid) {
            double processing = 0.0;
            double transmission = 0.0;
            for (std::size_t p = 0; p < seq.size(); ++p) {
                const int node = placement.node_of(k, p);
                if (node < 0) throw EvaluationError("oracle: unplaced VNF in chain " + topo.chains[k].id);
                const auto vnf = topo.vnf_index(seq[p]);
                if (!vnf) throw EvaluationError("oracle: unknown VNF " + seq[p]);
                processing += topo.vnfs[*vnf].demand.compute * beta /
                              topo.nodes[static_cast<std::size_t>(node)].processing_capacity;
            }
            for (std::size_t p = 0; p + 1 < seq.size(); ++p) {
                const int from = placement.node_of(k, p);
                const int to = placement.node_of(k, p + 1);
                if (from == to) continue;  // same node: zero
                const auto from_vnf = topo.vnf_index(seq[p]);
                const auto to_vnf = topo.vnf_index(seq[p + 1]);
                double rate = -1.0;
                for (const auto& link : topo.links) {
                    if (link.from != topo.nodes[static_cast<std::size_t>(from)].id ||
                        link.to != topo.nodes[static_cast<std::size_t>(to)].id)
                        continue;
                    for (const auto& alloc : link.allocations)
                        if (alloc.from_vnf == seq[p] && alloc.to_vnf == seq[p + 1]) rate = alloc.rate;
                }
                if (rate <= 0.0)
                    throw EvaluationError("oracle: no link allocation for hop " + seq[p] + "->" +
                                          seq[p + 1]);
                transmission += topo.vnfs[*from_vnf].demand.transmission * beta / rate;
            }
            total += processing + transmission;
        }
    }
    return total;
}

OptimalPlacement optimal_placement(const Scenario& scenario, const std::vector<double>& beta_grid,
                                   std::uint64_t bound) {
    OptimalPlacement best;
    best.objective_ms = std::numeric_limits<double>::infinity();
    bool found = false;
    enumerate_feasible_placements(scenario.topology, bound, [&](const PlacementMatrix& p) {
        ++best.enumerated;
        const double obj = oracle_objective(scenario, p, beta_grid);
        // Strict improvement keeps the lexicographically first minimizer.
        if (obj < best.objective_ms) {
            best.objective_ms = obj;
            best.placement = p;
            found = true;
        }
        return true;
    });
    if (!found) throw EvaluationError("oracle: no feasible complete placement exists");
    return best;
}

mfg::ValueVector dp_values(const mfg::Digraph& graph, const mfg::RewardKernel& kernel) {
    mfg::ValueVector values(graph.size(), 0.0);
    std::vector<char> state(graph.size(), 0);  // 0 new, 1 on stack, 2 done
    auto solve = [&](auto&& self, int s) -> double {
        if (state[s] == 2) return values[s];
        if (state[s] == 1) throw std::invalid_argument("dp_values: state graph has a cycle");
        state[s] = 1;
        double v = 0.0;
        if (graph.successor_count(s) > 0) {
            v = -std::numeric_limits<double>::infinity();
            for (int k = 0; k < graph.successor_count(s); ++k)
                v = std::max(v, kernel.values[s][k] + self(self, graph.successor(s, k)));
        }
        state[s] = 2;
        values[s] = v;
        return v;
    };
    for (int s = 0; s < graph.size(); ++s) solve(solve, s);
    return values;
}

std::vector<GoldenRecord> load_golden_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open golden file: " + path);
    json root;
    try {
        in >> root;
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("golden file parse error: ") + e.what());
    }
    std::vector<GoldenRecord> records;
    for (const auto& r : root.at("records")) {
        GoldenRecord rec;
        rec.scenario_name = r.at("scenario").get<std::string>();
        rec.scenario_hash = std::stoull(r.at("hash").get<std::string>(), nullptr, 16);
        rec.beta_grid = r.at("beta_grid").get<std::vector<double>>();
        rec.objective_ms = r.at("objective_ms").get<double>();
        records.push_back(std::move(rec));
    }
    return records;
}

void save_golden_file(const std::string& path, const std::vector<GoldenRecord>& records) {
    json root;
    root["records"] = json::array();
    for (const auto& r : records) {
        char hash_hex[17];
        std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                      static_cast<unsigned long long>(r.scenario_hash));
        root["records"].push_back(json{{"scenario", r.scenario_name},
                                       {"hash", hash_hex},
                                       {"beta_grid", r.beta_grid},
                                       {"objective_ms", r.objective_ms}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write golden file: " + path);
    out << root.dump(2) << "\n";
}

std::optional<GoldenRecord> find_golden(const std::vector<GoldenRecord>& records,
                                        std::uint64_t scenario_hash) {
    for (const auto& r : records)
        if (r.scenario_hash == scenario_hash) return r;
    return std::nullopt;
}

}  // namespace sfcmfg::oracle
