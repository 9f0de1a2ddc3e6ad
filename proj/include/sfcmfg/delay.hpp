#ifndef SFCMFG_DELAY_HPP
#define SFCMFG_DELAY_HPP

#include <string>
#include <vector>

#include "sfcmfg/topology.hpp"
#include "sfcmfg/workload.hpp"

namespace sfcmfg {

struct DelayBreakdown {
    double processing_ms = 0.0;
    double transmission_ms = 0.0;
    double total_ms = 0.0;  // always processing_ms + transmission_ms
};

// Computational time of the VNF at `position` of `chain` for a packet of
// `packet_bytes`: x * c_hat * beta / alpha. Zero when the slot is unplaced.
double processing_delay(const Topology& topo, const PlacementMatrix& placement,
                        std::size_t chain, std::size_t position, double packet_bytes);

// Sum of processing delays over the chain's VNFs. Requires every slot of the
// chain placed; throws EvaluationError otherwise.
double total_processing_delay(const Topology& topo, const PlacementMatrix& placement,
                              std::size_t chain, double packet_bytes);

// Forwarding time for the hop between consecutive positions `position` and
// `position + 1`: w_hat * beta / l, exactly 0 when both sit on one node,
// 0 when either endpoint is unplaced. A placed cross-node hop without a
// configured allocation throws EvaluationError.
double transmission_delay(const Topology& topo, const PlacementMatrix& placement,
                          std::size_t chain, std::size_t position, double packet_bytes);

// Sum over the chain's consecutive hops. Requires a fully placed chain.
double total_transmission_delay(const Topology& topo, const PlacementMatrix& placement,
                                std::size_t chain, double packet_bytes);

DelayBreakdown chain_delay(const Topology& topo, const PlacementMatrix& placement,
                           std::size_t chain, double packet_bytes);

DelayBreakdown request_delay(const Topology& topo, const PlacementMatrix& placement,
                             const Request& request);

// Sum of request_delay totals over all requests (the minimization target).
double objective(const Topology& topo, const PlacementMatrix& placement,
                 const std::vector<Request>& requests);

// Objective over one synthetic request per (chain, beta) cell; the quantity
// engines are compared on.
double grid_objective(const Topology& topo, const PlacementMatrix& placement,
                      const std::vector<double>& beta_grid);

// Per-request breakdown export.
// Columns: slot,user,chain,bytes,processing_ms,transmission_ms,total_ms,timeout_ms,timed_out
void write_delays_csv(const std::string& path, const Topology& topo,
                      const PlacementMatrix& placement, const std::vector<Request>& requests);

}  // namespace sfcmfg

#endif
