#ifndef SFCMFG_TOPOLOGY_HPP
#define SFCMFG_TOPOLOGY_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfcmfg/types.hpp"

namespace sfcmfg {

struct MecNode {
    std::string id;
    ResourceVector capacity;
    // Scalar divisor of the processing-delay formula, in bytes per
    // millisecond. Kept separate from `capacity`, which is the vector used by
    // the packing constraint.
    double processing_capacity = 0.0;
};

struct VnfSpec {
    std::string id;
    ResourceVector demand;
};

struct ServiceChain {
    std::string id;
    std::vector<std::string> vnf_sequence;  // first = ingress, last = egress

    std::size_t length() const { return vnf_sequence.size(); }
};

// Directed inter-node links. `total` caps the sum of per-VNF-pair
// allocations on the same (from, to) pair.
struct LinkAllocation {
    std::string from_vnf;
    std::string to_vnf;
    double rate = 0.0;  // bytes per millisecond
};

struct Link {
    std::string from;
    std::string to;
    double total = 0.0;  // bytes per millisecond
    std::vector<LinkAllocation> allocations;
};

struct Topology {
    std::vector<MecNode> nodes;
    std::vector<VnfSpec> vnfs;
    std::vector<ServiceChain> chains;
    std::vector<Link> links;

    std::optional<std::size_t> node_index(const std::string& id) const;
    std::optional<std::size_t> vnf_index(const std::string& id) const;
    std::optional<std::size_t> chain_index(const std::string& id) const;

    // Allocated rate for forwarding from VNF `from_vnf` on node `from` to VNF
    // `to_vnf` on node `to`; nullopt when no allocation is configured.
    std::optional<double> allocation(std::size_t from, std::size_t to,
                                     std::size_t from_vnf, std::size_t to_vnf) const;

    // Chain positions as VNF indices into `vnfs`. Requires valid references.
    std::vector<std::size_t> chain_vnf_indices(std::size_t chain) const;

    std::size_t total_slots() const;  // sum of chain lengths
};

// Binary VNF->node assignment per chain. Internally one node per
// (chain, position) slot, -1 meaning unplaced; x(i,j,k) derives from it, so
// "at most one node per (vnf, chain)" holds structurally.
class PlacementMatrix {
  public:
    PlacementMatrix() = default;
    PlacementMatrix(std::size_t num_chains, const std::vector<std::size_t>& chain_lengths);
    static PlacementMatrix empty_for(const Topology& topo);

    int node_of(std::size_t chain, std::size_t position) const;
    void place(std::size_t chain, std::size_t position, int node);
    void unplace(std::size_t chain, std::size_t position);

    // Eq.-style accessor: 1 iff VNF at `position` of `chain` sits on `node`.
    int entry(std::size_t node, std::size_t chain, std::size_t position) const;

    bool complete() const;  // every slot placed
    std::size_t num_chains() const { return slots_.size(); }
    std::size_t chain_length(std::size_t chain) const { return slots_.at(chain).size(); }

    friend bool operator==(const PlacementMatrix&, const PlacementMatrix&) = default;

  private:
    std::vector<std::vector<int>> slots_;  // [chain][position] -> node or -1
};

// Component-wise load each placement puts on each node.
std::vector<ResourceVector> placement_loads(const PlacementMatrix& placement, const Topology& topo);

// Structural well-formedness: negative capacities/demands, unknown
// references, duplicate ids, chain duplicates, link over-allocation,
// self-link allocations. Empty report means valid.
ValidationReport validate_topology(const Topology& topo);

enum class FeasibilityMode {
    // Literal constraint pair: each (vnf, chain) placed at most once and node
    // capacities respected. Used while searching.
    Partial,
    // Additionally every VNF of every chain placed exactly once; required
    // before delays can be evaluated.
    Complete,
};

bool is_feasible(const PlacementMatrix& placement, const Topology& topo,
                 FeasibilityMode mode = FeasibilityMode::Complete);

// Visits every complete feasible placement in lexicographic order over
// (chain, position, node). The visitor returns false to stop early. Throws
// EnumerationBoundExceeded when nodes^slots exceeds `bound`.
void enumerate_feasible_placements(const Topology& topo, std::uint64_t bound,
                                   const std::function<bool(const PlacementMatrix&)>& visit);

// Convenience: collect all complete feasible placements.
std::vector<PlacementMatrix> all_feasible_placements(const Topology& topo, std::uint64_t bound);

}  // namespace sfcmfg

#endif
