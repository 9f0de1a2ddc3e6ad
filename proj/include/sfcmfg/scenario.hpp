#ifndef SFCMFG_SCENARIO_HPP
#define SFCMFG_SCENARIO_HPP

#include <cstdint>
#include <string>

#include "sfcmfg/topology.hpp"
#include "sfcmfg/workload.hpp"

namespace sfcmfg {

// A full experiment description: infrastructure plus request model.
// Field names and units are documented in docs/scenario_format.md.
struct Scenario {
    std::string name;
    Topology topology;
    WorkloadConfig workload;
};

// Strict JSON loader: unknown fields are rejected, missing required fields
// are errors. Throws ScenarioError with a field-qualified message.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

std::string scenario_to_json(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

// FNV-1a hash of the canonical serialization; keys golden-value records.
std::uint64_t scenario_hash(const Scenario& scenario);

// Bundled templates ("paper" = the 3-node / 7-VNF / 3-chain evaluation
// setup). Throws ScenarioError for unknown template names.
Scenario make_template_scenario(const std::string& template_name);

}  // namespace sfcmfg

#endif
