#include "tiramisu/policies.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "tiramisu/errors.hpp"
#include "tiramisu/graph_builder.hpp"
#include "tiramisu/ilp.hpp"
#include "tiramisu/reach.hpp"
#include "tiramisu/taint.hpp"
#include "tiramisu/tpvp.hpp"
#include "tiramisu/tyen.hpp"

namespace tiramisu::policies {

using namespace tiramisu::graph;
using nlohmann::json;

std::string kind_name(PolicyKind k) {
    return "P" + std::to_string(static_cast<int>(k) + 1);
}

PolicyKind kind_from_name(const std::string& name) {
    for (int i = 0; i < 10; ++i)
        if (name == "P" + std::to_string(i + 1)) return static_cast<PolicyKind>(i);
    throw UnknownPolicyKind(name);
}

std::vector<PolicyRequest> requests_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("invalid request JSON: ") + e.what());
    }
    std::vector<json> items;
    if (j.is_array())
        items.assign(j.begin(), j.end());
    else
        items.push_back(j);
    std::vector<PolicyRequest> out;
    for (const auto& item : items) {
        try {
            PolicyRequest r;
            r.kind = kind_from_name(item.at("policy").get<std::string>());
            if (item.contains("traffic_class"))
                r.traffic_class = item.at("traffic_class").get<std::string>();
            if (item.contains("traffic_classes")) {
                auto tcs = item.at("traffic_classes").get<std::vector<std::string>>();
                if (!tcs.empty()) r.traffic_class = tcs[0];
                if (tcs.size() > 1) r.traffic_class_b = tcs[1];
            }
            if (item.contains("k")) r.k = item.at("k").get<int>();
            if (item.contains("waypoint"))
                r.waypoint = item.at("waypoint").get<std::string>();
            if (item.contains("waypoints"))
                r.waypoints = item.at("waypoints").get<std::vector<std::string>>();
            if (item.contains("preference"))
                r.preference =
                    item.at("preference").get<std::vector<std::vector<std::string>>>();
            out.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw SchemaError(std::string("bad request: ") + e.what());
        }
    }
    return out;
}

std::string request_to_json(const PolicyRequest& r) {
    json j;
    j["policy"] = kind_name(r.kind);
    if (!r.traffic_class_b.empty())
        j["traffic_classes"] = {r.traffic_class, r.traffic_class_b};
    else if (!r.traffic_class.empty())
        j["traffic_class"] = r.traffic_class;
    switch (r.kind) {
        case PolicyKind::P3:
        case PolicyKind::P4: j["k"] = r.k; break;
        case PolicyKind::P2: j["waypoint"] = r.waypoint; break;
        case PolicyKind::P6: j["waypoints"] = r.waypoints; break;
        case PolicyKind::P5: j["preference"] = r.preference; break;
        default: break;
    }
    return j.dump();
}

namespace {

const net_model::TrafficClass& tc_or_throw(const net_model::NetworkSpec& spec,
                                           const std::string& name) {
    const auto* tc = spec.find_traffic_class(name);
    if (!tc) throw UnknownTrafficClass(name);
    return *tc;
}

TaintedGraph tainted_tc_graph(const net_model::NetworkSpec& spec,
                              const net_model::TrafficClass& tc, bool keep_acl) {
    LayeredGraph base = graph_builder::build_base_graph(spec);
    LayeredGraph g = graph_builder::build_traffic_class_graph(base, tc, spec, keep_acl);
    return taint::propagate_taints(std::move(g));
}

}  // namespace

Verdict verify_p8_isolated(const std::string& tc_a, const std::string& tc_b,
                           const net_model::NetworkSpec& spec) {
    Verdict v;
    v.policy = "P8";
    const auto& a = tc_or_throw(spec, tc_a);
    const auto& b = tc_or_throw(spec, tc_b);
    LayeredGraph base = graph_builder::build_base_graph(spec);
    LayeredGraph ga = graph_builder::build_traffic_class_graph(base, a, spec, false);
    LayeredGraph gb = graph_builder::build_traffic_class_graph(base, b, spec, false);
    std::set<int> ha, hb;
    for (const auto& [link, edges] : ga.hedges) ha.insert(link);
    for (const auto& [link, edges] : gb.hedges) hb.insert(link);
    std::vector<int> shared;
    std::set_intersection(ha.begin(), ha.end(), hb.begin(), hb.end(),
                          std::back_inserter(shared));
    v.holds = shared.empty();
    if (!shared.empty()) {
        v.witness = Witness{};
        v.witness->hedge = spec.links[shared.front()].id();
    }
    return v;
}

Verdict verify_p9_multipath_consistency(const std::string& tc_name,
                                        const net_model::NetworkSpec& spec) {
    Verdict v;
    v.policy = "P9";
    const auto& tc = tc_or_throw(spec, tc_name);
    TaintedGraph keep = tainted_tc_graph(spec, tc, true);
    TaintedGraph removed = tainted_tc_graph(spec, tc, false);
    tpvp::RunMasks none;
    auto count_paths = [&](const TaintedGraph& g) {
        tpvp::MultiRibState st = tpvp::run_tpvp_multipath(g, g.g.dst_node, none);
        auto walks = tpvp::walk_traffic_multipath(g, spec, st, none);
        std::set<std::vector<std::string>> delivered;
        for (const auto& w : walks)
            if (w.delivered()) delivered.insert(w.devices);
        return delivered;
    };
    auto with_acl = count_paths(keep);
    auto without_acl = count_paths(removed);
    v.diagnostics.push_back("paths ignoring ACLs: " + std::to_string(with_acl.size()) +
                            ", with ACL edges removed: " +
                            std::to_string(without_acl.size()));
    v.holds = with_acl.size() == without_acl.size();
    if (!v.holds) {
        v.witness = Witness{};
        for (const auto& p : with_acl)
            if (!without_acl.count(p)) {
                v.witness->path = p;
                break;
            }
        if (!v.witness->path && !without_acl.empty())
            v.witness->path = *without_acl.begin();
    }
    return v;
}

Verdict verify(const PolicyRequest& request, const net_model::NetworkSpec& spec) {
    switch (request.kind) {
        case PolicyKind::P1: {
            const auto& tc = tc_or_throw(spec, request.traffic_class);
            return reach::verify_p1_always_blocked(tainted_tc_graph(spec, tc, false));
        }
        case PolicyKind::P2: {
            const auto& tc = tc_or_throw(spec, request.traffic_class);
            return reach::verify_p2_always_waypoint(tainted_tc_graph(spec, tc, false),
                                                    request.waypoint);
        }
        case PolicyKind::P3: {
            const auto& tc = tc_or_throw(spec, request.traffic_class);
            return ilp::verify_p3_reachable_k(tainted_tc_graph(spec, tc, false),
                                              tainted_tc_graph(spec, tc, true), spec,
                                              request.k);
        }
        case PolicyKind::P4: {
            const auto& tc = tc_or_throw(spec, request.traffic_class);
            return ilp::verify_p4_bounded_length(tainted_tc_graph(spec, tc, false),
                                                 request.k);
        }
        case PolicyKind::P5: {
            const auto& tc = tc_or_throw(spec, request.traffic_class);
            tyen::PreferencePolicy pref{request.preference};
            return tyen::run_tyen(tainted_tc_graph(spec, tc, false), spec, pref);
        }
        case PolicyKind::P6: {
            const auto& tc = tc_or_throw(spec, request.traffic_class);
            return reach::verify_p6_waypoint_chain(tainted_tc_graph(spec, tc, false),
                                                   request.waypoints);
        }
        case PolicyKind::P7: {
            const auto& tc = tc_or_throw(spec, request.traffic_class);
            return ilp::verify_p7_equal_bound(tainted_tc_graph(spec, tc, false));
        }
        case PolicyKind::P8:
            return verify_p8_isolated(request.traffic_class, request.traffic_class_b, spec);
        case PolicyKind::P9:
            return verify_p9_multipath_consistency(request.traffic_class, spec);
        case PolicyKind::P10: {
            const auto& tc = tc_or_throw(spec, request.traffic_class);
            return reach::verify_p10_no_blackholes(tainted_tc_graph(spec, tc, false),
                                                   tainted_tc_graph(spec, tc, true), spec);
        }
    }
    throw UnknownPolicyKind("unmapped policy kind");
}

}  // namespace tiramisu::policies

namespace tiramisu {

std::string to_json(const Verdict& v, bool pretty) {
    nlohmann::json j;
    j["policy"] = v.policy;
    j["holds"] = v.holds;
    if (v.witness) {
        nlohmann::json w;
        if (v.witness->path) w["path"] = *v.witness->path;
        if (v.witness->node_path) w["node_path"] = *v.witness->node_path;
        if (v.witness->scenario) w["scenario"] = *v.witness->scenario;
        if (v.witness->device) w["device"] = *v.witness->device;
        if (v.witness->hedge) w["hedge"] = *v.witness->hedge;
        j["witness"] = w;
    } else {
        j["witness"] = nullptr;
    }
    if (!v.diagnostics.empty()) j["diagnostics"] = v.diagnostics;
    return pretty ? j.dump(2) : j.dump();
}

}  // namespace tiramisu
