#include "tiramisu/net_model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace tiramisu::net_model {

using nlohmann::json;

const RoutingProcess* Device::find_process(const std::string& pname) const {
    for (const auto& p : processes)
        if (p.name == pname) return &p;
    return nullptr;
}

bool Device::has_interface(const std::string& ifname) const {
    return std::find(interfaces.begin(), interfaces.end(), ifname) != interfaces.end();
}

std::optional<int> Device::vlan_of(const std::string& ifname) const {
    for (const auto& v : vlans)
        if (v.interface == ifname) return v.vlan;
    return std::nullopt;
}

std::string PhysicalLink::id() const {
    std::string ea = device_a + ":" + interface_a;
    std::string eb = device_b + ":" + interface_b;
    if (eb < ea) std::swap(ea, eb);
    return ea + "--" + eb;
}

const Device* NetworkSpec::find_device(const std::string& name) const {
    for (const auto& d : devices)
        if (d.name == name) return &d;
    return nullptr;
}

const TrafficClass* NetworkSpec::find_traffic_class(const std::string& name) const {
    for (const auto& tc : traffic_classes)
        if (tc.name == name) return &tc;
    return nullptr;
}

std::vector<int> NetworkSpec::links_between(const std::string& a, const std::string& b) const {
    std::vector<int> out;
    for (size_t i = 0; i < links.size(); ++i) {
        const auto& l = links[i];
        if ((l.device_a == a && l.device_b == b) || (l.device_a == b && l.device_b == a))
            out.push_back(static_cast<int>(i));
    }
    return out;
}

bool valid_prefix(const std::string& prefix) {
    // a.b.c.d/len with octets 0-255 and len 0-32
    int octets[4], len;
    char dot;
    std::istringstream in(prefix);
    for (int i = 0; i < 4; ++i) {
        if (!(in >> octets[i])) return false;
        if (octets[i] < 0 || octets[i] > 255) return false;
        if (i < 3 && (!(in >> dot) || dot != '.')) return false;
    }
    if (!(in >> dot) || dot != '/') return false;
    if (!(in >> len) || len < 0 || len > 32) return false;
    std::string rest;
    return !(in >> rest);
}

namespace {

constexpr int kSpecVersion = 1;

std::string proto_str(ProcProtocol p) {
    switch (p) {
        case ProcProtocol::Ebgp: return "ebgp";
        case ProcProtocol::Ibgp: return "ibgp";
        case ProcProtocol::Ospf: return "ospf";
    }
    return "?";
}

ProcProtocol proto_from(const std::string& s) {
    if (s == "ebgp") return ProcProtocol::Ebgp;
    if (s == "ibgp") return ProcProtocol::Ibgp;
    if (s == "ospf") return ProcProtocol::Ospf;
    throw SchemaError("unknown protocol: " + s);
}

std::string verb_str(CommunityVerb v) {
    switch (v) {
        case CommunityVerb::Add: return "add";
        case CommunityVerb::Remove: return "remove";
        case CommunityVerb::Block: return "block";
        case CommunityVerb::SetLocalPref: return "set_local_pref";
        case CommunityVerb::SetMed: return "set_med";
    }
    return "?";
}

CommunityVerb verb_from(const std::string& s) {
    if (s == "add") return CommunityVerb::Add;
    if (s == "remove") return CommunityVerb::Remove;
    if (s == "block") return CommunityVerb::Block;
    if (s == "set_local_pref") return CommunityVerb::SetLocalPref;
    if (s == "set_med") return CommunityVerb::SetMed;
    throw SchemaError("unknown community action: " + s);
}

template <typename T>
T get_or(const json& j, const char* key, T def) {
    if (!j.contains(key)) return def;
    return j.at(key).get<T>();
}

std::map<std::string, int> int_map(const json& j, const char* key) {
    std::map<std::string, int> out;
    if (!j.contains(key)) return out;
    for (auto it = j.at(key).begin(); it != j.at(key).end(); ++it)
        out[it.key()] = it.value().get<int>();
    return out;
}

RoutingProcess parse_process(const json& j) {
    RoutingProcess p;
    p.protocol = proto_from(j.at("protocol").get<std::string>());
    p.name = get_or<std::string>(j, "name", proto_str(p.protocol));
    p.vrf = get_or<std::string>(j, "vrf", "default_vrf");
    p.as_number = get_or<int>(j, "as_number", -1);
    p.ibgp_peers = get_or<std::vector<std::string>>(j, "ibgp_peers", {});
    p.interface_costs = int_map(j, "interface_costs");
    p.redistributes_from = get_or<std::vector<std::string>>(j, "redistributes_from", {});
    for (const auto& f : get_or<std::vector<json>>(j, "route_filters", {}))
        p.route_filters.push_back({f.at("dst_prefix").get<std::string>()});
    for (const auto& a : get_or<std::vector<json>>(j, "community_actions", {})) {
        CommunityAction ca;
        ca.verb = verb_from(a.at("action").get<std::string>());
        ca.community = a.at("community").get<std::string>();
        ca.value = get_or<int>(a, "value", 0);
        ca.dst_prefix = get_or<std::string>(a, "dst_prefix", "");
        p.community_actions.push_back(ca);
    }
    p.local_pref_in = int_map(j, "local_pref_in");
    p.med_out = int_map(j, "med_out");
    return p;
}

Device parse_device(const json& j) {
    Device d;
    d.name = j.at("name").get<std::string>();
    std::string kind = get_or<std::string>(j, "kind", "router");
    if (kind == "router")
        d.kind = DeviceKind::Router;
    else if (kind == "switch")
        d.kind = DeviceKind::Switch;
    else
        throw SchemaError("device " + d.name + ": unknown kind " + kind);
    d.interfaces = get_or<std::vector<std::string>>(j, "interfaces", {});
    d.vrfs = get_or<std::vector<std::string>>(j, "vrfs", {"default_vrf"});
    if (std::find(d.vrfs.begin(), d.vrfs.end(), "default_vrf") == d.vrfs.end())
        d.vrfs.insert(d.vrfs.begin(), "default_vrf");  // default_vrf always present
    for (const auto& pj : get_or<std::vector<json>>(j, "processes", {}))
        d.processes.push_back(parse_process(pj));
    for (const auto& vj : get_or<std::vector<json>>(j, "vlans", {}))
        d.vlans.push_back({vj.at("interface").get<std::string>(), vj.at("vlan").get<int>()});
    for (const auto& aj : get_or<std::vector<json>>(j, "acls", {})) {
        AclRule r;
        r.interface = aj.at("interface").get<std::string>();
        std::string dir = aj.at("direction").get<std::string>();
        if (dir == "in")
            r.direction = AclDirection::In;
        else if (dir == "out")
            r.direction = AclDirection::Out;
        else
            throw SchemaError("device " + d.name + ": unknown ACL direction " + dir);
        if (get_or<std::string>(aj, "action", "deny") != "deny")
            throw SchemaError("device " + d.name + ": only deny ACLs are modeled");
        const json& m = aj.contains("match") ? aj.at("match") : aj;
        r.src_prefix = get_or<std::string>(m, "src_prefix", "");
        r.dst_prefix = get_or<std::string>(m, "dst_prefix", "");
        d.acls.push_back(r);
    }
    for (const auto& sj : get_or<std::vector<json>>(j, "static_routes", {})) {
        StaticRoute s;
        s.dst_prefix = sj.at("dst_prefix").get<std::string>();
        s.next_hop_router = sj.at("next_hop_router").get<std::string>();
        s.vrf = get_or<std::string>(sj, "vrf", "default_vrf");
        d.static_routes.push_back(s);
    }
    return d;
}

}  // namespace

NetworkSpec load_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    NetworkSpec spec;
    try {
        if (!j.contains("tiramisu_spec_version"))
            throw SchemaError("missing tiramisu_spec_version");
        if (j.at("tiramisu_spec_version").get<int>() != kSpecVersion)
            throw SchemaError("unsupported tiramisu_spec_version");
        for (const auto& dj : get_or<std::vector<json>>(j, "devices", {}))
            spec.devices.push_back(parse_device(dj));
        for (const auto& lj : get_or<std::vector<json>>(j, "links", {})) {
            PhysicalLink l;
            l.device_a = lj.at("device_a").get<std::string>();
            l.interface_a = lj.at("interface_a").get<std::string>();
            l.device_b = lj.at("device_b").get<std::string>();
            l.interface_b = lj.at("interface_b").get<std::string>();
            spec.links.push_back(l);
        }
        for (const auto& tj : get_or<std::vector<json>>(j, "traffic_classes", {})) {
            TrafficClass tc;
            tc.name = tj.at("name").get<std::string>();
            tc.src_prefix = tj.at("src_prefix").get<std::string>();
            tc.dst_prefix = tj.at("dst_prefix").get<std::string>();
            tc.src_router = tj.at("src_router").get<std::string>();
            tc.dst_router = tj.at("dst_router").get<std::string>();
            tc.vrf = get_or<std::string>(tj, "vrf", "default_vrf");
            spec.traffic_classes.push_back(tc);
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("document structure: ") + e.what());
    }

    auto diags = validate_spec(spec);
    if (!diags.empty()) {
        const auto& d = diags.front();
        std::string where = d.device.empty() ? d.field : d.device + "." + d.field;
        std::string msg = where + ": " + d.message +
                          (diags.size() > 1
                               ? " (+" + std::to_string(diags.size() - 1) + " more)"
                               : "");
        // Dangling names are reference errors, everything else an invariant.
        if (d.message.find("unknown") != std::string::npos ||
            d.message.find("no such") != std::string::npos)
            throw ReferenceError(msg);
        throw InvariantError(msg);
    }
    return spec;
}

NetworkSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_spec(ss.str());
}

std::string serialize(const NetworkSpec& spec) {
    json out;
    out["tiramisu_spec_version"] = kSpecVersion;
    out["devices"] = json::array();
    for (const auto& d : spec.devices) {
        json dj;
        dj["name"] = d.name;
        dj["kind"] = d.kind == DeviceKind::Router ? "router" : "switch";
        dj["interfaces"] = d.interfaces;
        dj["vrfs"] = d.vrfs;
        dj["processes"] = json::array();
        for (const auto& p : d.processes) {
            json pj;
            pj["name"] = p.name;
            pj["protocol"] = proto_str(p.protocol);
            pj["vrf"] = p.vrf;
            if (p.as_number >= 0) pj["as_number"] = p.as_number;
            if (!p.ibgp_peers.empty()) pj["ibgp_peers"] = p.ibgp_peers;
            if (!p.interface_costs.empty()) pj["interface_costs"] = p.interface_costs;
            if (!p.redistributes_from.empty()) pj["redistributes_from"] = p.redistributes_from;
            if (!p.route_filters.empty()) {
                pj["route_filters"] = json::array();
                for (const auto& f : p.route_filters)
                    pj["route_filters"].push_back({{"dst_prefix", f.dst_prefix}});
            }
            if (!p.community_actions.empty()) {
                pj["community_actions"] = json::array();
                for (const auto& a : p.community_actions) {
                    json aj{{"action", verb_str(a.verb)}, {"community", a.community}};
                    if (a.verb == CommunityVerb::SetLocalPref || a.verb == CommunityVerb::SetMed)
                        aj["value"] = a.value;
                    if (!a.dst_prefix.empty()) aj["dst_prefix"] = a.dst_prefix;
                    pj["community_actions"].push_back(aj);
                }
            }
            if (!p.local_pref_in.empty()) pj["local_pref_in"] = p.local_pref_in;
            if (!p.med_out.empty()) pj["med_out"] = p.med_out;
            dj["processes"].push_back(pj);
        }
        if (!d.vlans.empty()) {
            dj["vlans"] = json::array();
            for (const auto& v : d.vlans)
                dj["vlans"].push_back({{"interface", v.interface}, {"vlan", v.vlan}});
        }
        if (!d.acls.empty()) {
            dj["acls"] = json::array();
            for (const auto& a : d.acls) {
                json aj;
                aj["interface"] = a.interface;
                aj["direction"] = a.direction == AclDirection::In ? "in" : "out";
                aj["action"] = "deny";
                json m;
                if (!a.src_prefix.empty()) m["src_prefix"] = a.src_prefix;
                if (!a.dst_prefix.empty()) m["dst_prefix"] = a.dst_prefix;
                aj["match"] = m;
                dj["acls"].push_back(aj);
            }
        }
        if (!d.static_routes.empty()) {
            dj["static_routes"] = json::array();
            for (const auto& s : d.static_routes) {
                json sj{{"dst_prefix", s.dst_prefix}, {"next_hop_router", s.next_hop_router}};
                if (s.vrf != "default_vrf") sj["vrf"] = s.vrf;
                dj["static_routes"].push_back(sj);
            }
        }
        out["devices"].push_back(dj);
    }
    out["links"] = json::array();
    for (const auto& l : spec.links)
        out["links"].push_back({{"device_a", l.device_a},
                                {"interface_a", l.interface_a},
                                {"device_b", l.device_b},
                                {"interface_b", l.interface_b}});
    out["traffic_classes"] = json::array();
    for (const auto& tc : spec.traffic_classes) {
        json tj{{"name", tc.name},
                {"src_prefix", tc.src_prefix},
                {"dst_prefix", tc.dst_prefix},
                {"src_router", tc.src_router},
                {"dst_router", tc.dst_router}};
        if (tc.vrf != "default_vrf") tj["vrf"] = tc.vrf;
        out["traffic_classes"].push_back(tj);
    }
    return out.dump(2);
}

std::vector<Diagnostic> validate_spec(const NetworkSpec& spec) {
    std::vector<Diagnostic> diags;
    auto add = [&](const std::string& dev, const std::string& field, const std::string& msg) {
        diags.push_back({dev, field, msg});
    };

    std::set<std::string> names;
    for (const auto& d : spec.devices) {
        if (!names.insert(d.name).second) add(d.name, "name", "duplicate device name");
    }

    for (const auto& d : spec.devices) {
        std::set<std::string> pnames;
        for (const auto& p : d.processes) {
            if (!pnames.insert(p.name).second)
                add(d.name, "processes", "duplicate process name " + p.name);
        }
        if (d.kind == DeviceKind::Switch) {
            if (!d.processes.empty())
                add(d.name, "processes", "switches carry no routing processes");
            if (!d.static_routes.empty())
                add(d.name, "static_routes", "switches carry no static routes");
            for (const auto& v : d.vlans)
                if (!d.has_interface(v.interface))
                    add(d.name, "vlans", "no such interface " + v.interface);
        } else {
            if (d.processes.empty() && d.static_routes.empty())
                add(d.name, "processes", "routers carry at least one process or static route");
            if (!d.vlans.empty())
                add(d.name, "vlans", "VLAN membership is a switch construct");
        }
        for (const auto& p : d.processes) {
            if (std::find(d.vrfs.begin(), d.vrfs.end(), p.vrf) == d.vrfs.end())
                add(d.name, "processes." + p.name, "no such vrf " + p.vrf);
            if (p.is_bgp()) {
                if (p.as_number < 0)
                    add(d.name, "processes." + p.name, "BGP process requires as_number");
                if (!p.interface_costs.empty())
                    add(d.name, "processes." + p.name, "interface_costs is OSPF-only");
            } else {
                if (p.as_number >= 0)
                    add(d.name, "processes." + p.name, "as_number is BGP-only");
                if (!p.ibgp_peers.empty())
                    add(d.name, "processes." + p.name, "ibgp_peers is BGP-only");
                for (const auto& [ifname, cost] : p.interface_costs) {
                    if (cost < 1)
                        add(d.name, "processes." + p.name,
                            "OSPF cost must be >= 1 on " + ifname);
                    if (!d.has_interface(ifname))
                        add(d.name, "processes." + p.name, "no such interface " + ifname);
                }
            }
            for (const auto& [nbr, lp] : p.local_pref_in)
                if (lp < 0) add(d.name, "processes." + p.name, "local-pref < 0 for " + nbr);
            for (const auto& [nbr, med] : p.med_out)
                if (med < 0) add(d.name, "processes." + p.name, "MED < 0 for " + nbr);
            for (const auto& r : p.redistributes_from) {
                const RoutingProcess* other = d.find_process(r);
                if (!other)
                    add(d.name, "processes." + p.name,
                        "redistribution references unknown process " + r +
                            " (must be on the same device)");
                else if (other->name == p.name)
                    add(d.name, "processes." + p.name, "process redistributes itself");
            }
            for (const auto& f : p.route_filters)
                if (!valid_prefix(f.dst_prefix))
                    add(d.name, "processes." + p.name, "invalid filter prefix " + f.dst_prefix);
            for (const auto& peer : p.ibgp_peers) {
                const Device* pd = spec.find_device(peer);
                if (!pd) {
                    add(d.name, "processes." + p.name, "unknown iBGP peer device " + peer);
                    continue;
                }
                const RoutingProcess* pp = nullptr;
                for (const auto& q : pd->processes)
                    if (q.is_bgp() && q.vrf == p.vrf) pp = &q;
                if (!pp) {
                    add(d.name, "processes." + p.name,
                        "iBGP peer " + peer + " has no BGP process in vrf " + p.vrf);
                } else if (pp->as_number != p.as_number) {
                    add(d.name, "processes." + p.name,
                        "iBGP peering with " + peer + " crosses AS boundary");
                }
                // The i-edge needs an underlying IGP on both ends.
                bool has_igp = false;
                for (const auto& q : d.processes)
                    if (q.protocol == ProcProtocol::Ospf && q.vrf == p.vrf) has_igp = true;
                if (!has_igp)
                    add(d.name, "processes." + p.name,
                        "iBGP peering requires an IGP process in the same vrf");
            }
        }
        for (const auto& a : d.acls) {
            if (!d.has_interface(a.interface))
                add(d.name, "acls", "no such interface " + a.interface);
            if (!a.src_prefix.empty() && !valid_prefix(a.src_prefix))
                add(d.name, "acls", "invalid prefix " + a.src_prefix);
            if (!a.dst_prefix.empty() && !valid_prefix(a.dst_prefix))
                add(d.name, "acls", "invalid prefix " + a.dst_prefix);
        }
        for (const auto& s : d.static_routes) {
            if (!valid_prefix(s.dst_prefix))
                add(d.name, "static_routes", "invalid prefix " + s.dst_prefix);
            const Device* nh = spec.find_device(s.next_hop_router);
            if (!nh)
                add(d.name, "static_routes", "unknown next-hop router " + s.next_hop_router);
            else if (!spec.adjacent(d.name, s.next_hop_router))
                add(d.name, "static_routes",
                    "next hop " + s.next_hop_router + " is not physically adjacent");
        }
    }

    for (size_t i = 0; i < spec.links.size(); ++i) {
        const auto& l = spec.links[i];
        auto check_end = [&](const std::string& dev, const std::string& ifname) {
            const Device* d = spec.find_device(dev);
            if (!d)
                add("", "links[" + std::to_string(i) + "]", "unknown device " + dev);
            else if (!d->has_interface(ifname))
                add(dev, "links[" + std::to_string(i) + "]", "no such interface " + ifname);
        };
        check_end(l.device_a, l.interface_a);
        check_end(l.device_b, l.interface_b);
        if (l.device_a == l.device_b)
            add(l.device_a, "links[" + std::to_string(i) + "]", "self-link");
    }

    for (const auto& tc : spec.traffic_classes) {
        auto check_router = [&](const std::string& field, const std::string& dev) {
            const Device* d = spec.find_device(dev);
            if (!d)
                add("", "traffic_classes." + tc.name + "." + field, "unknown device " + dev);
            else if (d->kind != DeviceKind::Router)
                add(dev, "traffic_classes." + tc.name + "." + field,
                    "traffic class endpoint must be a router");
        };
        check_router("src_router", tc.src_router);
        check_router("dst_router", tc.dst_router);
        if (tc.src_router == tc.dst_router)
            add("", "traffic_classes." + tc.name, "src_router equals dst_router");
        if (!valid_prefix(tc.src_prefix))
            add("", "traffic_classes." + tc.name, "invalid src_prefix");
        if (!valid_prefix(tc.dst_prefix))
            add("", "traffic_classes." + tc.name, "invalid dst_prefix");
    }

    return diags;
}

}  // namespace tiramisu::net_model
