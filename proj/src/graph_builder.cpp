#include "tiramisu/graph_builder.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tiramisu::graph_builder {

using namespace tiramisu::graph;
using namespace tiramisu::net_model;

int default_ad(NodeProto proto) {
    switch (proto) {
        case NodeProto::Ebgp: return 20;
        case NodeProto::Ibgp: return 200;
        case NodeProto::Ospf: return 110;
        case NodeProto::Static: return 1;
        case NodeProto::None: return 255;
    }
    return 255;
}

namespace {

NodeProto node_proto(ProcProtocol p) {
    switch (p) {
        case ProcProtocol::Ebgp: return NodeProto::Ebgp;
        case ProcProtocol::Ibgp: return NodeProto::Ibgp;
        case ProcProtocol::Ospf: return NodeProto::Ospf;
    }
    return NodeProto::None;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) {
        for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Interface of `device` on link l.
const std::string& link_interface(const PhysicalLink& l, const std::string& device) {
    return l.device_a == device ? l.interface_a : l.interface_b;
}

bool prefix_matches(const std::string& rule_prefix, const std::string& tc_prefix) {
    return rule_prefix.empty() || rule_prefix == tc_prefix;  // exact-prefix model
}

bool acl_matches(const AclRule& a, const TrafficClass& tc) {
    return prefix_matches(a.src_prefix, tc.src_prefix) &&
           prefix_matches(a.dst_prefix, tc.dst_prefix);
}

// True when an ACL on either endpoint denies tc across this edge.
bool edge_acl_denied(const NetworkSpec& spec, const TrafficClass& tc,
                     const PhysicalLink& link, const std::string& from_device,
                     const std::string& to_device) {
    const Device* fd = spec.find_device(from_device);
    const Device* td = spec.find_device(to_device);
    if (fd) {
        const std::string& ifname = link_interface(link, from_device);
        for (const auto& a : fd->acls)
            if (a.direction == AclDirection::Out && a.interface == ifname &&
                acl_matches(a, tc))
                return true;
    }
    if (td) {
        const std::string& ifname = link_interface(link, to_device);
        for (const auto& a : td->acls)
            if (a.direction == AclDirection::In && a.interface == ifname &&
                acl_matches(a, tc))
                return true;
    }
    return false;
}

}  // namespace

LayeredGraph build_base_graph(const NetworkSpec& spec) {
    LayeredGraph g;

    // Nodes, in lexicographic (device, kind, proto, vrf, vlan, proc) order.
    for (const auto& d : spec.devices) {
        if (d.kind == DeviceKind::Switch) {
            std::set<int> vlan_ids;
            for (const auto& v : d.vlans) vlan_ids.insert(v.vlan);
            for (int v : vlan_ids) {
                NodeId n;
                n.device = d.name;
                n.kind = NodeKind::Vlan;
                n.vlan = v;
                g.nodes.push_back(n);
            }
            continue;
        }
        for (const auto& p : d.processes) {
            NodeId n;
            n.device = d.name;
            n.kind = NodeKind::Proc;
            n.proto = node_proto(p.protocol);
            n.vrf = p.vrf;
            n.proc = p.name;
            g.nodes.push_back(n);
        }
        std::set<std::string> static_vrfs;
        for (const auto& s : d.static_routes) static_vrfs.insert(s.vrf);
        for (const auto& vrf : static_vrfs) {
            NodeId n;
            n.device = d.name;
            n.kind = NodeKind::Proc;
            n.proto = NodeProto::Static;
            n.vrf = vrf;
            n.proc = "static";
            g.nodes.push_back(n);
        }
        NodeId fib;
        fib.device = d.name;
        fib.kind = NodeKind::Fib;
        g.nodes.push_back(fib);
    }
    std::sort(g.nodes.begin(), g.nodes.end());

    auto proc_nodes_of = [&](const std::string& device) {
        std::vector<int> out;
        for (size_t i = 0; i < g.nodes.size(); ++i)
            if (g.nodes[i].device == device && g.nodes[i].kind == NodeKind::Proc)
                out.push_back(static_cast<int>(i));
        return out;
    };
    auto find_proc_node = [&](const std::string& device, const std::string& proc) {
        for (size_t i = 0; i < g.nodes.size(); ++i)
            if (g.nodes[i].device == device && g.nodes[i].kind == NodeKind::Proc &&
                g.nodes[i].proc == proc)
                return static_cast<int>(i);
        return -1;
    };
    auto find_fib_node = [&](const std::string& device) {
        for (size_t i = 0; i < g.nodes.size(); ++i)
            if (g.nodes[i].device == device && g.nodes[i].kind == NodeKind::Fib)
                return static_cast<int>(i);
        return -1;
    };
    auto find_vlan_node = [&](const std::string& device, int vlan) {
        for (size_t i = 0; i < g.nodes.size(); ++i)
            if (g.nodes[i].device == device && g.nodes[i].kind == NodeKind::Vlan &&
                g.nodes[i].vlan == vlan)
                return static_cast<int>(i);
        return -1;
    };

    auto add_edge = [&](int from, int to, EdgeLabel label, MetricVector m, int link) {
        Edge e;
        e.from = from;
        e.to = to;
        e.label = label;
        e.metrics = m;
        e.link = link;
        g.edges.push_back(e);
    };

    // Inter-device edges, one per direction per physical link.
    for (size_t li = 0; li < spec.links.size(); ++li) {
        const auto& l = spec.links[li];
        const Device* da = spec.find_device(l.device_a);
        const Device* db = spec.find_device(l.device_b);
        if (!da || !db) continue;
        int link = static_cast<int>(li);

        if (da->kind == DeviceKind::Switch && db->kind == DeviceKind::Switch) {
            auto va = da->vlan_of(l.interface_a);
            auto vb = db->vlan_of(l.interface_b);
            if (va && vb && *va == *vb) {  // VLAN isolation: ids must match
                int na = find_vlan_node(da->name, *va);
                int nb = find_vlan_node(db->name, *vb);
                add_edge(na, nb, EdgeLabel::P, {}, link);
                add_edge(nb, na, EdgeLabel::P, {}, link);
            }
            continue;
        }
        if (da->kind != db->kind) {
            const Device* sw = da->kind == DeviceKind::Switch ? da : db;
            const Device* rt = da->kind == DeviceKind::Switch ? db : da;
            auto vlan = sw->vlan_of(link_interface(l, sw->name));
            if (!vlan) continue;
            int sn = find_vlan_node(sw->name, *vlan);
            for (int rn : proc_nodes_of(rt->name)) {
                add_edge(sn, rn, EdgeLabel::P, {}, link);
                add_edge(rn, sn, EdgeLabel::P, {}, link);
            }
            continue;
        }

        // Router-router: same protocol instance and same VRF.
        for (const auto& pa : da->processes) {
            for (const auto& pb : db->processes) {
                if (pa.vrf != pb.vrf) continue;
                int na = find_proc_node(da->name, pa.name);
                int nb = find_proc_node(db->name, pb.name);
                if (pa.protocol == ProcProtocol::Ospf && pb.protocol == ProcProtocol::Ospf) {
                    auto ca = pa.interface_costs.find(link_interface(l, da->name));
                    auto cb = pb.interface_costs.find(link_interface(l, db->name));
                    if (ca == pa.interface_costs.end() || cb == pb.interface_costs.end())
                        continue;  // interface not OSPF-enabled
                    MetricVector mab;  // traffic a->b pays a's egress cost
                    mab.ad = default_ad(NodeProto::Ospf);
                    mab.ospf_cost = ca->second;
                    MetricVector mba;
                    mba.ad = default_ad(NodeProto::Ospf);
                    mba.ospf_cost = cb->second;
                    add_edge(na, nb, EdgeLabel::O, mab, link);
                    add_edge(nb, na, EdgeLabel::O, mba, link);
                } else if (pa.protocol == ProcProtocol::Ebgp &&
                           pb.protocol == ProcProtocol::Ebgp &&
                           pa.as_number != pb.as_number) {
                    auto lp_in = [&](const RoutingProcess& recv, const std::string& nbr) {
                        auto it = recv.local_pref_in.find(nbr);
                        return it == recv.local_pref_in.end() ? kDefaultLocalPref : it->second;
                    };
                    auto med_out = [&](const RoutingProcess& send, const std::string& nbr) {
                        auto it = send.med_out.find(nbr);
                        return it == send.med_out.end() ? kDefaultMed : it->second;
                    };
                    MetricVector mab;  // a receives the advertisement from b
                    mab.ad = default_ad(NodeProto::Ebgp);
                    mab.as_path_increment = 1;
                    mab.local_pref = lp_in(pa, db->name);
                    mab.med = med_out(pb, da->name);
                    MetricVector mba;
                    mba.ad = default_ad(NodeProto::Ebgp);
                    mba.as_path_increment = 1;
                    mba.local_pref = lp_in(pb, da->name);
                    mba.med = med_out(pa, db->name);
                    add_edge(na, nb, EdgeLabel::B, mab, link);
                    add_edge(nb, na, EdgeLabel::B, mba, link);
                }
            }
        }
    }

    // Intra-device edges.
    std::set<std::pair<int, int>> session_set;
    for (const auto& d : spec.devices) {
        if (d.kind == DeviceKind::Switch) continue;
        int fib = find_fib_node(d.name);
        for (int pn : proc_nodes_of(d.name)) {
            add_edge(pn, fib, EdgeLabel::F, {}, -1);
            add_edge(fib, pn, EdgeLabel::F, {}, -1);
        }
        for (const auto& p : d.processes) {
            int pn = find_proc_node(d.name, p.name);
            for (const auto& from : p.redistributes_from) {
                int xn = find_proc_node(d.name, from);
                if (xn >= 0) add_edge(pn, xn, EdgeLabel::R, {}, -1);
            }
            for (const auto& peer : p.ibgp_peers) {
                const Device* pd = spec.find_device(peer);
                if (!pd) continue;
                for (const auto& q : pd->processes) {
                    if (!q.is_bgp() || q.vrf != p.vrf) continue;
                    int qn = find_proc_node(peer, q.name);
                    if (qn < 0) continue;
                    auto key = std::minmax(pn, qn);
                    session_set.insert({key.first, key.second});
                }
            }
        }
    }

    // Underlying IGP per BGP node, and one i-edge per iBGP participant.
    g.underlying_igp.assign(g.nodes.size(), -1);
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        const NodeId& n = g.nodes[i];
        if (n.kind != NodeKind::Proc ||
            (n.proto != NodeProto::Ebgp && n.proto != NodeProto::Ibgp))
            continue;
        for (size_t j = 0; j < g.nodes.size(); ++j) {
            const NodeId& m = g.nodes[j];
            if (m.device == n.device && m.kind == NodeKind::Proc &&
                m.proto == NodeProto::Ospf && m.vrf == n.vrf) {
                g.underlying_igp[i] = static_cast<int>(j);
                break;
            }
        }
    }
    std::set<int> ibgp_participants;
    for (const auto& [a, b] : session_set) {
        g.ibgp_sessions.push_back({a, b});
        g.ibgp_sessions.push_back({b, a});
        ibgp_participants.insert(a);
        ibgp_participants.insert(b);
    }
    std::sort(g.ibgp_sessions.begin(), g.ibgp_sessions.end());
    for (int n : ibgp_participants)
        if (g.underlying_igp[n] >= 0)
            g.edges.push_back(
                {-1, n, g.underlying_igp[n], EdgeLabel::I, {}, -1, false});

    g.comms.assign(g.nodes.size(), {});
    g.renumber_edges_sorted();

    // IGP instance ids: OSPF processes connected by o-edges share an instance.
    UnionFind uf(g.nodes.size());
    for (const auto& e : g.edges)
        if (e.label == EdgeLabel::O) uf.unite(e.from, e.to);
    g.igp_instance.assign(g.nodes.size(), -1);
    std::map<int, int> roots;
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        if (g.nodes[i].kind == NodeKind::Proc && g.nodes[i].proto == NodeProto::Ospf) {
            int r = uf.find(static_cast<int>(i));
            auto [it, fresh] = roots.insert({r, static_cast<int>(roots.size())});
            g.igp_instance[i] = it->second;
        }
    }
    return g;
}

LayeredGraph build_traffic_class_graph(const LayeredGraph& base, const TrafficClass& tc,
                                       const NetworkSpec& spec, bool keep_acl_edges) {
    if (!spec.find_traffic_class(tc.name)) throw UnknownTrafficClass(tc.name);
    LayeredGraph g = base;
    g.tc_name = tc.name;
    g.src_device = tc.src_router;
    g.dst_device = tc.dst_router;
    g.vrf = tc.vrf;

    // Route filters: a filter on the start-node process for tc's destination
    // prefix removes that process's protocol adjacencies.
    std::vector<char> filtered(g.nodes.size(), 0);
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        const NodeId& n = g.nodes[i];
        if (n.kind != NodeKind::Proc) continue;
        const Device* d = spec.find_device(n.device);
        if (!d) continue;
        const RoutingProcess* p = d->find_process(n.proc);
        if (!p) continue;
        for (const auto& f : p->route_filters)
            if (f.dst_prefix == tc.dst_prefix) filtered[i] = 1;
    }

    std::vector<Edge> kept;
    for (auto e : g.edges) {
        if (e.inter_device() &&
            edge_acl_denied(spec, tc, spec.links[e.link], g.nodes[e.from].device,
                            g.nodes[e.to].device)) {
            if (!keep_acl_edges) continue;
            e.acl_deny = true;
        }
        if ((e.label == EdgeLabel::O || e.label == EdgeLabel::B) && filtered[e.from])
            continue;
        kept.push_back(e);
    }
    g.edges = std::move(kept);

    // Filtered processes also stop importing over iBGP sessions.
    std::vector<std::pair<int, int>> sessions;
    for (const auto& [recv, send] : g.ibgp_sessions)
        if (!filtered[recv]) sessions.push_back({recv, send});
    g.ibgp_sessions = std::move(sessions);

    // Static routes matching this traffic class: s-edges from the static node
    // to every node of the next-hop router, one per connecting physical link.
    for (const auto& d : spec.devices) {
        for (const auto& s : d.static_routes) {
            if (s.dst_prefix != tc.dst_prefix || s.vrf != tc.vrf) continue;
            NodeId sid;
            sid.device = d.name;
            sid.kind = NodeKind::Proc;
            sid.proto = NodeProto::Static;
            sid.vrf = s.vrf;
            sid.proc = "static";
            int sn = g.node_index(sid);
            if (sn < 0) continue;
            for (int li : spec.links_between(d.name, s.next_hop_router)) {
                for (size_t j = 0; j < g.nodes.size(); ++j) {
                    const NodeId& n = g.nodes[j];
                    if (n.device != s.next_hop_router) continue;
                    if (n.kind != NodeKind::Proc && n.kind != NodeKind::Fib) continue;
                    Edge e;
                    e.from = sn;
                    e.to = static_cast<int>(j);
                    e.label = EdgeLabel::S;
                    e.metrics.ad = default_ad(NodeProto::Static);
                    e.link = li;
                    if (edge_acl_denied(spec, tc, spec.links[li], d.name,
                                        s.next_hop_router)) {
                        if (!keep_acl_edges) continue;
                        e.acl_deny = true;
                    }
                    g.edges.push_back(e);
                }
            }
        }
    }

    // Endpoint nodes. src feeds all of srcRouter's process nodes (including
    // the static pseudo-process); dstRouter's routing processes feed dst.
    NodeId src_id, dst_id;
    src_id.kind = NodeKind::Src;
    dst_id.kind = NodeKind::Dst;
    int src = static_cast<int>(g.nodes.size());
    g.nodes.push_back(src_id);
    int dst = static_cast<int>(g.nodes.size());
    g.nodes.push_back(dst_id);
    g.src_node = src;
    g.dst_node = dst;
    g.underlying_igp.resize(g.nodes.size(), -1);
    g.igp_instance.resize(g.nodes.size(), -1);
    g.comms.resize(g.nodes.size());
    for (size_t i = 0; i + 2 < g.nodes.size(); ++i) {
        const NodeId& n = g.nodes[i];
        if (n.kind != NodeKind::Proc || n.vrf != tc.vrf) continue;
        if (n.device == tc.src_router)
            g.edges.push_back({-1, src, static_cast<int>(i), EdgeLabel::F, {}, -1, false});
        if (n.device == tc.dst_router && n.proto != NodeProto::Static)
            g.edges.push_back({-1, static_cast<int>(i), dst, EdgeLabel::F, {}, -1, false});
    }

    // Per-node community sets for this traffic class.
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        g.comms[i] = {};
        const NodeId& n = g.nodes[i];
        if (n.kind != NodeKind::Proc) continue;
        const Device* d = spec.find_device(n.device);
        if (!d) continue;
        const RoutingProcess* p = d->find_process(n.proc);
        if (!p) continue;
        for (const auto& a : p->community_actions) {
            if (!prefix_matches(a.dst_prefix, tc.dst_prefix)) continue;
            switch (a.verb) {
                case CommunityVerb::Add: g.comms[i].added.insert(a.community); break;
                case CommunityVerb::Remove: g.comms[i].removed.insert(a.community); break;
                default:
                    g.comms[i].matched[a.community] = a;
                    if (a.verb == CommunityVerb::Block)
                        g.comms[i].blocked.insert(a.community);
            }
        }
    }

    g.taint.assign(g.nodes.size(), 0);
    g.taint_filled = false;
    g.renumber_edges_sorted();
    g.acl_denied_edges.clear();
    for (const auto& e : g.edges)
        if (e.acl_deny) g.acl_denied_edges.push_back(e.id);
    return g;
}

}  // namespace tiramisu::graph_builder
