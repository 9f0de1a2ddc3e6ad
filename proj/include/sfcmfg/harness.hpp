#ifndef SFCMFG_HARNESS_HPP
#define SFCMFG_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfcmfg/scenario.hpp"

namespace sfcmfg::harness {

struct RunOptions {
    std::uint64_t seed = 0;
    std::optional<int> episodes;        // rl override
    double beta_ref = 1.0e6;            // bytes; evaluation/reference packet
    std::string config_path;            // optional JSON overrides file
    std::string policy_in;              // rl: decode-only from snapshot
    std::string policy_out;             // rl: snapshot destination override
};

struct RunResult {
    std::string engine;
    std::uint64_t seed = 0;
    double objective_ms = 0.0;  // grid objective of the final placement
    double wall_time_ms = 0.0;  // reported in run.log, never in CSVs
    PlacementMatrix placement;
};

// Runs one engine ("mfg", "rl", "ga", "oracle") on the scenario and writes
// its CSV artifacts plus summary.csv and run.log into out_dir.
RunResult cmd_run(const Scenario& scenario, const std::string& engine,
                  const RunOptions& options, const std::string& out_dir);

struct SweepOptions {
    std::vector<std::string> engines;  // subset of {mfg, rl, ga, oracle}
    double beta_min = 1.0e5;
    double beta_max = 2.0e6;
    int steps = 5;
    std::vector<std::uint64_t> seeds = {1};
    bool retrain_per_beta = false;
    RunOptions run;  // shared engine options (seed field ignored)
};

struct SweepCell {
    std::string chain_id;
    double beta = 0.0;
    std::string engine;
    double mean_delay_ms = 0.0;
    double stddev_ms = 0.0;
};

// Per-chain delay of each engine's final placement across the packet-size
// grid, averaged over seeds. Writes sweep.csv; returns the table in its
// deterministic row order (chain, beta, engine).
std::vector<SweepCell> cmd_sweep(const Scenario& scenario, const SweepOptions& options,
                                 const std::string& out_dir);

// Writes the named template scenario ("paper") to out_path.
void cmd_scenario_gen(const std::string& template_name, const std::string& out_path);

}  // namespace sfcmfg::harness

#endif
