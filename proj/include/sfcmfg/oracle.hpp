#ifndef SFCMFG_ORACLE_HPP
#define SFCMFG_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfcmfg/mfg.hpp"
#include "sfcmfg/scenario.hpp"

namespace sfcmfg::oracle {

// Straight-line re-implementation of the delay equations, deliberately
// independent of delay.cpp so the two paths check each other. One synthetic
// request per (chain, beta) cell.
double oracle_objective(const Scenario& scenario, const PlacementMatrix& placement,
                        const std::vector<double>& beta_grid);

struct OptimalPlacement {
    PlacementMatrix placement;
    double objective_ms = 0.0;
    std::uint64_t enumerated = 0;  // feasible placements inspected
};

// Exhaustive minimum of the objective over all complete feasible placements;
// ties resolve to the lexicographically first placement. Throws
// EnumerationBoundExceeded for instances larger than `bound`.
OptimalPlacement optimal_placement(const Scenario& scenario, const std::vector<double>& beta_grid,
                                   std::uint64_t bound = 10'000'000);

// Independent finite-horizon value oracle: plain recursion over an acyclic
// successor graph, max over successors of r + V. No code shared with the mfg
// solver's sweeps. Throws std::invalid_argument on cycles.
mfg::ValueVector dp_values(const mfg::Digraph& graph, const mfg::RewardKernel& kernel);

// Golden-value records: scenario hash -> optimal objective, committed after
// first computation and asserted by the acceptance suite.
struct GoldenRecord {
    std::string scenario_name;
    std::uint64_t scenario_hash = 0;
    std::vector<double> beta_grid;
    double objective_ms = 0.0;
};

std::vector<GoldenRecord> load_golden_file(const std::string& path);
void save_golden_file(const std::string& path, const std::vector<GoldenRecord>& records);
std::optional<GoldenRecord> find_golden(const std::vector<GoldenRecord>& records,
                                        std::uint64_t scenario_hash);

}  // namespace sfcmfg::oracle

#endif
