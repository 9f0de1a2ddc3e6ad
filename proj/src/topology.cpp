#include "sfcmfg/topology.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sfcmfg/csv.hpp"

namespace sfcmfg {

std::string ValidationReport::to_string() const {
    std::string s;
    for (const auto& v : violations) {
        s += v.code;
        s += ": ";
        s += v.message;
        s += '\n';
    }
    return s;
}

std::optional<std::size_t> Topology::node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return i;
    return std::nullopt;
}

std::optional<std::size_t> Topology::vnf_index(const std::string& id) const {
    for (std::size_t i = 0; i < vnfs.size(); ++i)
        if (vnfs[i].id == id) return i;
    return std::nullopt;
}

std::optional<std::size_t> Topology::chain_index(const std::string& id) const {
    for (std::size_t i = 0; i < chains.size(); ++i)
        if (chains[i].id == id) return i;
    return std::nullopt;
}

std::optional<double> Topology::allocation(std::size_t from, std::size_t to,
                                           std::size_t from_vnf, std::size_t to_vnf) const {
    const std::string& from_id = nodes.at(from).id;
    const std::string& to_id = nodes.at(to).id;
    const std::string& fv = vnfs.at(from_vnf).id;
    const std::string& tv = vnfs.at(to_vnf).id;
    for (const auto& link : links) {
        if (link.from != from_id || link.to != to_id) continue;
        for (const auto& alloc : link.allocations)
            if (alloc.from_vnf == fv && alloc.to_vnf == tv) return alloc.rate;
    }
    return std::nullopt;
}

std::vector<std::size_t> Topology::chain_vnf_indices(std::size_t chain) const {
    const auto& seq = chains.at(chain).vnf_sequence;
    std::vector<std::size_t> out;
    out.reserve(seq.size());
    for (const auto& id : seq) {
        auto idx = vnf_index(id);
        if (!idx) throw ScenarioError("chain " + chains[chain].id + " references unknown VNF " + id);
        out.push_back(*idx);
    }
    return out;
}

std::size_t Topology::total_slots() const {
    std::size_t n = 0;
    for (const auto& c : chains) n += c.length();
    return n;
}

PlacementMatrix::PlacementMatrix(std::size_t num_chains,
                                 const std::vector<std::size_t>& chain_lengths) {
    slots_.resize(num_chains);
    for (std::size_t k = 0; k < num_chains; ++k)
        slots_[k].assign(chain_lengths.at(k), -1);
}

PlacementMatrix PlacementMatrix::empty_for(const Topology& topo) {
    std::vector<std::size_t> lens;
    lens.reserve(topo.chains.size());
    for (const auto& c : topo.chains) lens.push_back(c.length());
    return PlacementMatrix(topo.chains.size(), lens);
}

int PlacementMatrix::node_of(std::size_t chain, std::size_t position) const {
    return slots_.at(chain).at(position);
}

void PlacementMatrix::place(std::size_t chain, std::size_t position, int node) {
    if (node < 0) throw std::out_of_range("PlacementMatrix::place: negative node");
    slots_.at(chain).at(position) = node;
}

void PlacementMatrix::unplace(std::size_t chain, std::size_t position) {
    slots_.at(chain).at(position) = -1;
}

int PlacementMatrix::entry(std::size_t node, std::size_t chain, std::size_t position) const {
    return slots_.at(chain).at(position) == static_cast<int>(node) ? 1 : 0;
}

bool PlacementMatrix::complete() const {
    for (const auto& chain : slots_)
        for (int node : chain)
            if (node < 0) return false;
    return true;
}

std::vector<ResourceVector> placement_loads(const PlacementMatrix& placement, const Topology& topo) {
    std::vector<ResourceVector> loads(topo.nodes.size());
    for (std::size_t k = 0; k < topo.chains.size(); ++k) {
        const auto vnf_idx = topo.chain_vnf_indices(k);
        for (std::size_t p = 0; p < vnf_idx.size(); ++p) {
            int node = placement.node_of(k, p);
            if (node < 0) continue;
            if (node >= static_cast<int>(topo.nodes.size()))
                throw std::out_of_range("placement references node out of range");
            loads[static_cast<std::size_t>(node)] += topo.vnfs[vnf_idx[p]].demand;
        }
    }
    return loads;
}

ValidationReport validate_topology(const Topology& topo) {
    ValidationReport report;

    std::set<std::string> seen;
    for (const auto& node : topo.nodes) {
        if (!seen.insert(node.id).second)
            report.add("duplicate-node", "node id repeated: " + node.id);
        if (!node.capacity.nonnegative())
            report.add("negative-capacity", "node " + node.id + " has a negative capacity component");
        if (!(node.processing_capacity > 0.0))
            report.add("nonpositive-processing-capacity",
                       "node " + node.id + " must have processing_capacity > 0");
    }

    seen.clear();
    for (const auto& vnf : topo.vnfs) {
        if (!seen.insert(vnf.id).second)
            report.add("duplicate-vnf", "vnf id repeated: " + vnf.id);
        if (!vnf.demand.nonnegative())
            report.add("negative-demand", "vnf " + vnf.id + " has a negative demand component");
    }

    seen.clear();
    for (const auto& chain : topo.chains) {
        if (!seen.insert(chain.id).second)
            report.add("duplicate-chain", "chain id repeated: " + chain.id);
        if (chain.vnf_sequence.empty())
            report.add("empty-chain", "chain " + chain.id + " has no VNFs");
        std::set<std::string> in_chain;
        for (const auto& vnf_id : chain.vnf_sequence) {
            if (!topo.vnf_index(vnf_id))
                report.add("unknown-vnf", "chain " + chain.id + " references unknown VNF " + vnf_id);
            if (!in_chain.insert(vnf_id).second)
                report.add("duplicate-vnf-in-chain",
                           "chain " + chain.id + " lists VNF " + vnf_id + " twice");
        }
    }

    std::set<std::pair<std::string, std::string>> seen_links;
    for (const auto& link : topo.links) {
        const std::string pair = link.from + "->" + link.to;
        if (!topo.node_index(link.from))
            report.add("unknown-node", "link " + pair + " references unknown node " + link.from);
        if (!topo.node_index(link.to))
            report.add("unknown-node", "link " + pair + " references unknown node " + link.to);
        if (link.from == link.to)
            report.add("self-link", "link " + pair + ": allocations exist only between distinct nodes");
        if (!(link.total > 0.0))
            report.add("nonpositive-link-capacity", "link " + pair + " must have total > 0");
        if (!seen_links.insert({link.from, link.to}).second)
            report.add("duplicate-link", "link pair repeated: " + pair);

        double allocated = 0.0;
        std::set<std::pair<std::string, std::string>> seen_allocs;
        for (const auto& alloc : link.allocations) {
            if (!topo.vnf_index(alloc.from_vnf))
                report.add("unknown-vnf", "link " + pair + " allocation references unknown VNF " +
                                              alloc.from_vnf);
            if (!topo.vnf_index(alloc.to_vnf))
                report.add("unknown-vnf",
                           "link " + pair + " allocation references unknown VNF " + alloc.to_vnf);
            if (!(alloc.rate > 0.0))
                report.add("nonpositive-allocation",
                           "link " + pair + " allocation " + alloc.from_vnf + "->" + alloc.to_vnf +
                               " must be > 0");
            if (!seen_allocs.insert({alloc.from_vnf, alloc.to_vnf}).second)
                report.add("duplicate-allocation", "link " + pair + " repeats allocation " +
                                                       alloc.from_vnf + "->" + alloc.to_vnf);
            allocated += alloc.rate;
        }
        if (allocated > link.total * (1.0 + 1e-12))
            report.add("link-over-allocation",
                       "link " + pair + " allocates " + format_double(allocated) +
                           " over a total of " + format_double(link.total));
    }

    return report;
}

bool is_feasible(const PlacementMatrix& placement, const Topology& topo, FeasibilityMode mode) {
    if (placement.num_chains() != topo.chains.size())
        throw std::out_of_range("placement chain count does not match topology");
    for (std::size_t k = 0; k < topo.chains.size(); ++k) {
        if (placement.chain_length(k) != topo.chains[k].length())
            throw std::out_of_range("placement slot count does not match chain length");
        for (std::size_t p = 0; p < placement.chain_length(k); ++p) {
            int node = placement.node_of(k, p);
            if (node >= static_cast<int>(topo.nodes.size()))
                throw std::out_of_range("placement references node out of range");
            if (mode == FeasibilityMode::Complete && node < 0) return false;
        }
    }
    const auto loads = placement_loads(placement, topo);
    for (std::size_t i = 0; i < loads.size(); ++i)
        if (!loads[i].fits_within(topo.nodes[i].capacity)) return false;
    return true;
}

void enumerate_feasible_placements(const Topology& topo, std::uint64_t bound,
                                   const std::function<bool(const PlacementMatrix&)>& visit) {
    const std::size_t slots = topo.total_slots();
    const std::size_t n = topo.nodes.size();
    if (n == 0) throw ScenarioError("enumerate: topology has no nodes");

    // Pre-check nodes^slots against the caller's bound.
    double combos = std::pow(static_cast<double>(n), static_cast<double>(slots));
    if (combos > static_cast<double>(bound))
        throw EnumerationBoundExceeded("enumeration of " + format_double(combos) +
                                       " assignments exceeds bound " + std::to_string(bound));

    // (chain, position) slots in lexicographic order.
    std::vector<std::pair<std::size_t, std::size_t>> order;
    std::vector<ResourceVector> demand_of_slot;
    for (std::size_t k = 0; k < topo.chains.size(); ++k) {
        const auto vnf_idx = topo.chain_vnf_indices(k);
        for (std::size_t p = 0; p < vnf_idx.size(); ++p) {
            order.emplace_back(k, p);
            demand_of_slot.push_back(topo.vnfs[vnf_idx[p]].demand);
        }
    }

    PlacementMatrix placement = PlacementMatrix::empty_for(topo);
    std::vector<int> assigned(order.size(), -1);
    bool stop = false;

    // Load of `node` if the slot at `depth` joined it, summed in slot order
    // so the check is bit-identical to placement_loads on the final matrix.
    auto load_with = [&](std::size_t depth, std::size_t node) {
        ResourceVector load;
        for (std::size_t d = 0; d < depth; ++d)
            if (assigned[d] == static_cast<int>(node)) load += demand_of_slot[d];
        load += demand_of_slot[depth];
        return load;
    };

    // DFS over slots with capacity pruning (demands are nonnegative, so a
    // partial overflow cannot recover).
    auto recurse = [&](auto&& self, std::size_t depth) -> void {
        if (stop) return;
        if (depth == order.size()) {
            if (!visit(placement)) stop = true;
            return;
        }
        const auto [k, p] = order[depth];
        for (std::size_t node = 0; node < n && !stop; ++node) {
            if (load_with(depth, node).fits_within(topo.nodes[node].capacity)) {
                placement.place(k, p, static_cast<int>(node));
                assigned[depth] = static_cast<int>(node);
                self(self, depth + 1);
                assigned[depth] = -1;
                placement.unplace(k, p);
            }
        }
    };
    recurse(recurse, 0);
}

std::vector<PlacementMatrix> all_feasible_placements(const Topology& topo, std::uint64_t bound) {
    std::vector<PlacementMatrix> out;
    enumerate_feasible_placements(topo, bound, [&](const PlacementMatrix& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

}  // namespace sfcmfg
