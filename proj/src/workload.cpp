#include "sfcmfg/workload.hpp"

#include <cmath>

#include "sfcmfg/csv.hpp"
#include "sfcmfg/rng.hpp"

namespace sfcmfg {

ValidationReport validate_workload(const WorkloadConfig& config) {
    ValidationReport report;
    if (config.packet_min <= 0.0)
        report.add("nonpositive-packet-min", "packet_min must be > 0");
    if (config.packet_min > config.packet_max)
        report.add("packet-range", "packet_min must be <= packet_max");
    if (config.arrival_rate < 0.0)
        report.add("negative-rate", "arrival_rate must be >= 0");
    if (config.arrival_rate > 500.0)
        report.add("rate-too-large", "arrival_rate above the sampler limit of 500/slot");
    if (config.chain_ids.size() != config.chain_weights.size() ||
        config.chain_ids.size() != config.chain_timeouts_ms.size())
        report.add("chain-arrays", "chain ids, weights and timeouts must align");
    if (config.chain_ids.empty())
        report.add("no-chains", "workload needs at least one chain");
    double sum = 0.0;
    for (double w : config.chain_weights) {
        if (w < 0.0) report.add("negative-weight", "chain weights must be >= 0");
        sum += w;
    }
    if (!config.chain_weights.empty() && std::abs(sum - 1.0) > 1e-9)
        report.add("weight-sum", "chain weights must sum to 1 within 1e-9");
    for (double t : config.chain_timeouts_ms)
        if (!(t > 0.0)) report.add("nonpositive-timeout", "timeouts must be > 0");
    return report;
}

std::vector<Request> generate_requests(const WorkloadConfig& config) {
    auto report = validate_workload(config);
    if (!report.ok()) throw ScenarioError("invalid workload config:\n" + report.to_string());

    Rng rng(config.seed);
    std::vector<Request> requests;
    std::uint64_t user_counter = 0;
    for (std::uint64_t slot = 0; slot < config.horizon; ++slot) {
        const std::uint64_t count = rng.poisson(config.arrival_rate);
        for (std::uint64_t r = 0; r < count; ++r) {
            const std::size_t chain = rng.discrete(config.chain_weights);
            Request req;
            req.user_id = "u" + std::to_string(user_counter++);
            req.chain_id = config.chain_ids[chain];
            req.packet_size = rng.uniform(config.packet_min, config.packet_max);
            req.timeout_ms = config.chain_timeouts_ms[chain];
            req.arrival_slot = slot;
            requests.push_back(std::move(req));
        }
    }
    return requests;
}

void write_requests_csv(const std::string& path, const std::vector<Request>& requests) {
    CsvWriter csv(path, {"slot", "user", "chain", "bytes", "timeout_ms"});
    for (const auto& r : requests) {
        csv.field(r.arrival_slot)
            .field(r.user_id)
            .field(r.chain_id)
            .field(r.packet_size)
            .field(r.timeout_ms);
        csv.end_row();
    }
}

}  // namespace sfcmfg
