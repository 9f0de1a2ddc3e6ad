#include "sfcmfg/delay.hpp"

#include "sfcmfg/csv.hpp"

namespace sfcmfg {

namespace {

std::size_t require_chain(const Topology& topo, std::size_t chain) {
    if (chain >= topo.chains.size()) throw std::out_of_range("chain index out of range");
    return chain;
}

}  // namespace

double processing_delay(const Topology& topo, const PlacementMatrix& placement,
                        std::size_t chain, std::size_t position, double packet_bytes) {
    require_chain(topo, chain);
    const int node = placement.node_of(chain, position);
    if (node < 0) return 0.0;  // x = 0: the term vanishes
    const auto vnf_idx = topo.chain_vnf_indices(chain);
    const VnfSpec& vnf = topo.vnfs.at(vnf_idx.at(position));
    const MecNode& host = topo.nodes.at(static_cast<std::size_t>(node));
    return vnf.demand.compute * packet_bytes / host.processing_capacity;
}

double total_processing_delay(const Topology& topo, const PlacementMatrix& placement,
                              std::size_t chain, double packet_bytes) {
    require_chain(topo, chain);
    double sum = 0.0;
    for (std::size_t p = 0; p < topo.chains[chain].length(); ++p) {
        if (placement.node_of(chain, p) < 0)
            throw EvaluationError("cannot evaluate delay: chain " + topo.chains[chain].id +
                                  " has an unplaced VNF");
        sum += processing_delay(topo, placement, chain, p, packet_bytes);
    }
    return sum;
}

double transmission_delay(const Topology& topo, const PlacementMatrix& placement,
                          std::size_t chain, std::size_t position, double packet_bytes) {
    require_chain(topo, chain);
    if (position + 1 >= topo.chains[chain].length())
        throw std::out_of_range("hop position past the chain egress");
    const int from = placement.node_of(chain, position);
    const int to = placement.node_of(chain, position + 1);
    if (from < 0 || to < 0) return 0.0;  // either x factor is 0
    if (from == to) return 0.0;          // same node: defined to be zero
    const auto vnf_idx = topo.chain_vnf_indices(chain);
    const std::size_t from_vnf = vnf_idx.at(position);
    const std::size_t to_vnf = vnf_idx.at(position + 1);
    const auto rate = topo.allocation(static_cast<std::size_t>(from), static_cast<std::size_t>(to),
                                      from_vnf, to_vnf);
    if (!rate)
        throw EvaluationError("no link allocation for " + topo.vnfs[from_vnf].id + "@" +
                              topo.nodes[static_cast<std::size_t>(from)].id + " -> " +
                              topo.vnfs[to_vnf].id + "@" +
                              topo.nodes[static_cast<std::size_t>(to)].id);
    const VnfSpec& sender = topo.vnfs[from_vnf];
    return sender.demand.transmission * packet_bytes / *rate;
}

double total_transmission_delay(const Topology& topo, const PlacementMatrix& placement,
                                std::size_t chain, double packet_bytes) {
    require_chain(topo, chain);
    const std::size_t len = topo.chains[chain].length();
    for (std::size_t p = 0; p < len; ++p)
        if (placement.node_of(chain, p) < 0)
            throw EvaluationError("cannot evaluate delay: chain " + topo.chains[chain].id +
                                  " has an unplaced VNF");
    double sum = 0.0;
    for (std::size_t p = 0; p + 1 < len; ++p)
        sum += transmission_delay(topo, placement, chain, p, packet_bytes);
    return sum;
}

DelayBreakdown chain_delay(const Topology& topo, const PlacementMatrix& placement,
                           std::size_t chain, double packet_bytes) {
    DelayBreakdown d;
    d.processing_ms = total_processing_delay(topo, placement, chain, packet_bytes);
    d.transmission_ms = total_transmission_delay(topo, placement, chain, packet_bytes);
    d.total_ms = d.processing_ms + d.transmission_ms;
    return d;
}

DelayBreakdown request_delay(const Topology& topo, const PlacementMatrix& placement,
                             const Request& request) {
    const auto chain = topo.chain_index(request.chain_id);
    if (!chain) throw EvaluationError("request references unknown chain " + request.chain_id);
    return chain_delay(topo, placement, *chain, request.packet_size);
}

double objective(const Topology& topo, const PlacementMatrix& placement,
                 const std::vector<Request>& requests) {
    double sum = 0.0;
    for (const auto& r : requests) sum += request_delay(topo, placement, r).total_ms;
    return sum;
}

double grid_objective(const Topology& topo, const PlacementMatrix& placement,
                      const std::vector<double>& beta_grid) {
    double sum = 0.0;
    for (std::size_t k = 0; k < topo.chains.size(); ++k)
        for (double beta : beta_grid) sum += chain_delay(topo, placement, k, beta).total_ms;
    return sum;
}

void write_delays_csv(const std::string& path, const Topology& topo,
                      const PlacementMatrix& placement, const std::vector<Request>& requests) {
    CsvWriter csv(path, {"slot", "user", "chain", "bytes", "processing_ms", "transmission_ms",
                         "total_ms", "timeout_ms", "timed_out"});
    for (const auto& r : requests) {
        const auto d = request_delay(topo, placement, r);
        csv.field(r.arrival_slot)
            .field(r.user_id)
            .field(r.chain_id)
            .field(r.packet_size)
            .field(d.processing_ms)
            .field(d.transmission_ms)
            .field(d.total_ms)
            .field(r.timeout_ms)
            .field(static_cast<std::int64_t>(d.total_ms > r.timeout_ms ? 1 : 0));
        csv.end_row();
    }
}

}  // namespace sfcmfg
