#ifndef SFCMFG_WORKLOAD_HPP
#define SFCMFG_WORKLOAD_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sfcmfg/types.hpp"

namespace sfcmfg {

struct Request {
    std::string user_id;
    std::string chain_id;
    double packet_size = 0.0;    // bytes
    double timeout_ms = 0.0;     // milliseconds
    std::uint64_t arrival_slot = 0;
};

struct WorkloadConfig {
    double packet_min = 0.0;  // bytes
    double packet_max = 0.0;  // bytes
    double arrival_rate = 0.0;  // mean requests per slot (Poisson counts)
    std::uint64_t horizon = 0;  // number of slots
    // Parallel arrays, ordered as in the scenario file.
    std::vector<std::string> chain_ids;
    std::vector<double> chain_weights;       // must sum to 1 +- 1e-9
    std::vector<double> chain_timeouts_ms;   // per-chain constant timeout
    std::uint64_t seed = 0;
};

ValidationReport validate_workload(const WorkloadConfig& config);

// Deterministic given the seed: per-slot counts are Poisson(arrival_rate),
// packet sizes uniform on [packet_min, packet_max], chain picked by weight.
std::vector<Request> generate_requests(const WorkloadConfig& config);

// Columns: slot,user,chain,bytes,timeout_ms
void write_requests_csv(const std::string& path, const std::vector<Request>& requests);

}  // namespace sfcmfg

#endif
