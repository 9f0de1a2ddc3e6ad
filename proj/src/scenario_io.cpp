#include <fstream>
#include <set>

#include <json.hpp>

#include "sfcmfg/scenario.hpp"

namespace sfcmfg {

using nlohmann::json;

namespace {

// Strict object access: every field must be consumed, unknown keys fail.
class StrictObject {
  public:
    StrictObject(const json& j, std::string where) : obj_(j), where_(std::move(where)) {
        if (!j.is_object()) throw ScenarioError(where_ + ": expected an object");
    }
    ~StrictObject() = default;

    const json& require(const std::string& key) {
        auto it = obj_.find(key);
        if (it == obj_.end()) throw ScenarioError(where_ + ": missing field '" + key + "'");
        used_.insert(key);
        return *it;
    }

    const json* optional(const std::string& key) {
        auto it = obj_.find(key);
        if (it == obj_.end()) return nullptr;
        used_.insert(key);
        return &*it;
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!used_.count(it.key()))
                throw ScenarioError(where_ + ": unknown field '" + it.key() + "'");
    }

  private:
    const json& obj_;
    std::string where_;
    std::set<std::string> used_;
};

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ScenarioError(where + ": expected a number");
    return j.get<double>();
}

std::string as_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw ScenarioError(where + ": expected a string");
    return j.get<std::string>();
}

std::uint64_t as_u64(const json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !j.is_number_integer())
        throw ScenarioError(where + ": expected a nonnegative integer");
    auto v = j.get<std::int64_t>();
    if (v < 0) throw ScenarioError(where + ": expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
}

ResourceVector parse_resources(const json& j, const std::string& where) {
    StrictObject obj(j, where);
    ResourceVector r;
    r.compute = as_number(obj.require("compute"), where + ".compute");
    r.storage = as_number(obj.require("storage"), where + ".storage");
    r.transmission = as_number(obj.require("transmission"), where + ".transmission");
    obj.finish();
    return r;
}

json resources_to_json(const ResourceVector& r) {
    return json{{"compute", r.compute}, {"storage", r.storage}, {"transmission", r.transmission}};
}

const json& as_array(const json& j, const std::string& where) {
    if (!j.is_array()) throw ScenarioError(where + ": expected an array");
    return j;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json root_json;
    try {
        root_json = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario JSON parse error: ") + e.what());
    }

    Scenario scenario;
    StrictObject root(root_json, "scenario");

    const auto version = as_u64(root.require("schema_version"), "scenario.schema_version");
    if (version != 1)
        throw ScenarioError("scenario.schema_version: unsupported version " +
                            std::to_string(version));
    scenario.name = as_string(root.require("name"), "scenario.name");

    for (const auto& node_json : as_array(root.require("nodes"), "scenario.nodes")) {
        StrictObject node(node_json, "node");
        MecNode n;
        n.id = as_string(node.require("id"), "node.id");
        n.capacity = parse_resources(node.require("capacity"), "node.capacity");
        n.processing_capacity =
            as_number(node.require("processing_capacity"), "node.processing_capacity");
        node.finish();
        scenario.topology.nodes.push_back(std::move(n));
    }

    for (const auto& vnf_json : as_array(root.require("vnfs"), "scenario.vnfs")) {
        StrictObject vnf(vnf_json, "vnf");
        VnfSpec v;
        v.id = as_string(vnf.require("id"), "vnf.id");
        v.demand = parse_resources(vnf.require("demand"), "vnf.demand");
        vnf.finish();
        scenario.topology.vnfs.push_back(std::move(v));
    }

    for (const auto& chain_json : as_array(root.require("chains"), "scenario.chains")) {
        StrictObject chain(chain_json, "chain");
        ServiceChain c;
        c.id = as_string(chain.require("id"), "chain.id");
        for (const auto& vnf_id : as_array(chain.require("vnfs"), "chain.vnfs"))
            c.vnf_sequence.push_back(as_string(vnf_id, "chain.vnfs[]"));
        chain.finish();
        scenario.topology.chains.push_back(std::move(c));
    }

    for (const auto& link_json : as_array(root.require("links"), "scenario.links")) {
        StrictObject link(link_json, "link");
        Link l;
        l.from = as_string(link.require("from"), "link.from");
        l.to = as_string(link.require("to"), "link.to");
        l.total = as_number(link.require("total"), "link.total");
        for (const auto& alloc_json : as_array(link.require("allocations"), "link.allocations")) {
            StrictObject alloc(alloc_json, "link.allocation");
            LinkAllocation a;
            a.from_vnf = as_string(alloc.require("from_vnf"), "allocation.from_vnf");
            a.to_vnf = as_string(alloc.require("to_vnf"), "allocation.to_vnf");
            a.rate = as_number(alloc.require("rate"), "allocation.rate");
            alloc.finish();
            l.allocations.push_back(std::move(a));
        }
        link.finish();
        scenario.topology.links.push_back(std::move(l));
    }

    {
        StrictObject wl(root.require("workload"), "scenario.workload");
        WorkloadConfig& w = scenario.workload;
        w.packet_min = as_number(wl.require("packet_min_bytes"), "workload.packet_min_bytes");
        w.packet_max = as_number(wl.require("packet_max_bytes"), "workload.packet_max_bytes");
        w.arrival_rate = as_number(wl.require("arrival_rate"), "workload.arrival_rate");
        w.horizon = as_u64(wl.require("horizon_slots"), "workload.horizon_slots");
        w.seed = as_u64(wl.require("seed"), "workload.seed");
        for (const auto& chain_json : as_array(wl.require("chains"), "workload.chains")) {
            StrictObject chain(chain_json, "workload.chain");
            w.chain_ids.push_back(as_string(chain.require("id"), "workload.chain.id"));
            w.chain_weights.push_back(as_number(chain.require("weight"), "workload.chain.weight"));
            w.chain_timeouts_ms.push_back(
                as_number(chain.require("timeout_ms"), "workload.chain.timeout_ms"));
            chain.finish();
        }
        wl.finish();
    }

    root.finish();

    // Workload chains must reference declared chains, in matching order.
    if (scenario.workload.chain_ids.size() != scenario.topology.chains.size())
        throw ScenarioError("workload.chains must list every declared chain");
    for (std::size_t k = 0; k < scenario.topology.chains.size(); ++k)
        if (scenario.workload.chain_ids[k] != scenario.topology.chains[k].id)
            throw ScenarioError("workload.chains must match scenario.chains order (" +
                                scenario.workload.chain_ids[k] + " vs " +
                                scenario.topology.chains[k].id + ")");

    return scenario;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_scenario(text);
}

std::string scenario_to_json(const Scenario& scenario) {
    json root;
    root["schema_version"] = 1;
    root["name"] = scenario.name;

    root["nodes"] = json::array();
    for (const auto& n : scenario.topology.nodes)
        root["nodes"].push_back(json{{"id", n.id},
                                     {"capacity", resources_to_json(n.capacity)},
                                     {"processing_capacity", n.processing_capacity}});

    root["vnfs"] = json::array();
    for (const auto& v : scenario.topology.vnfs)
        root["vnfs"].push_back(json{{"id", v.id}, {"demand", resources_to_json(v.demand)}});

    root["chains"] = json::array();
    for (const auto& c : scenario.topology.chains)
        root["chains"].push_back(json{{"id", c.id}, {"vnfs", c.vnf_sequence}});

    root["links"] = json::array();
    for (const auto& l : scenario.topology.links) {
        json allocs = json::array();
        for (const auto& a : l.allocations)
            allocs.push_back(
                json{{"from_vnf", a.from_vnf}, {"to_vnf", a.to_vnf}, {"rate", a.rate}});
        root["links"].push_back(json{
            {"from", l.from}, {"to", l.to}, {"total", l.total}, {"allocations", allocs}});
    }

    json chains = json::array();
    for (std::size_t k = 0; k < scenario.workload.chain_ids.size(); ++k)
        chains.push_back(json{{"id", scenario.workload.chain_ids[k]},
                              {"weight", scenario.workload.chain_weights[k]},
                              {"timeout_ms", scenario.workload.chain_timeouts_ms[k]}});
    root["workload"] = json{{"packet_min_bytes", scenario.workload.packet_min},
                            {"packet_max_bytes", scenario.workload.packet_max},
                            {"arrival_rate", scenario.workload.arrival_rate},
                            {"horizon_slots", scenario.workload.horizon},
                            {"seed", scenario.workload.seed},
                            {"chains", chains}};

    return root.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write scenario file: " + path);
    out << scenario_to_json(scenario);
}

std::uint64_t scenario_hash(const Scenario& scenario) {
    const std::string canonical = scenario_to_json(scenario);
    std::uint64_t h = 14695981039346656037ull;  // FNV-1a 64
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace sfcmfg
