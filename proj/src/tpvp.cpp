#include "tiramisu/tpvp.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "tiramisu/errors.hpp"
#include "tiramisu/graph_builder.hpp"
#include "tiramisu/taint.hpp"

namespace tiramisu::tpvp {

using namespace tiramisu::graph;

namespace {

bool edge_alive(const Edge& e, const RunMasks& masks) {
    if (e.link >= 0 && masks.dead_links.count(e.link)) return false;
    return true;
}

bool node_alive(int n, const RunMasks& masks) {
    return masks.dead_nodes.empty() || !masks.dead_nodes[n];
}

// Smaller is better; deterministic tie-break on next hop then full path.
std::tuple<int, int, int, int, int> metric_key(const Advertisement& a) {
    return {a.cost.ad, -a.cost.local_pref, a.cost.as_path_len, a.cost.med, a.cost.igp_cost};
}

bool device_revisits(const LayeredGraph& g, int u, const std::vector<int>& path) {
    // The path may keep a leading block of u's own device (intra-device hops);
    // any later occurrence of the device is a loop at forwarding level.
    const std::string& dev = g.nodes[u].device;
    size_t i = 0;
    while (i < path.size() && g.nodes[path[i]].device == dev) ++i;
    for (; i < path.size(); ++i) {
        const NodeId& n = g.nodes[path[i]];
        if (n.kind != NodeKind::Src && n.kind != NodeKind::Dst && n.device == dev)
            return true;
    }
    return false;
}

// Community processing at receiving node u: arriving advertisements carrying
// a community u blocks are rejected; matched set-lp/set-med rewrite metrics;
// then u's adds/removes apply.
bool apply_node_communities(const LayeredGraph& g, int u, Advertisement& adv) {
    const NodeCommunities& c = g.comms[u];
    for (const auto& comm : adv.communities)
        if (c.blocked.count(comm)) return false;
    for (const auto& [comm, act] : c.matched) {
        if (!adv.communities.count(comm)) continue;
        if (act.verb == net_model::CommunityVerb::SetLocalPref)
            adv.cost.local_pref = act.value;
        else if (act.verb == net_model::CommunityVerb::SetMed)
            adv.cost.med = act.value;
    }
    for (const auto& comm : c.added) adv.communities.insert(comm);
    for (const auto& comm : c.removed) adv.communities.erase(comm);
    return true;
}

}  // namespace

bool better(const Advertisement& a, const Advertisement& b) {
    auto ka = metric_key(a), kb = metric_key(b);
    if (ka != kb) return ka < kb;
    int nha = a.path.size() > 1 ? a.path[1] : -1;
    int nhb = b.path.size() > 1 ? b.path[1] : -1;
    if (nha != nhb) return nha < nhb;
    return a.path < b.path;
}

std::optional<Advertisement> choices(const std::vector<Advertisement>& candidates) {
    if (candidates.empty()) return std::nullopt;
    const Advertisement* best = &candidates[0];
    for (const auto& c : candidates)
        if (better(c, *best)) best = &c;
    return *best;
}

std::vector<Advertisement> choices_all(const std::vector<Advertisement>& candidates) {
    std::vector<Advertisement> out;
    if (candidates.empty()) return out;
    auto best = metric_key(*std::min_element(
        candidates.begin(), candidates.end(),
        [](const Advertisement& a, const Advertisement& b) { return better(a, b); }));
    for (const auto& c : candidates)
        if (metric_key(c) == best) out.push_back(c);
    std::sort(out.begin(), out.end(),
              [](const Advertisement& a, const Advertisement& b) { return a.path < b.path; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<Advertisement> update_cost(const TaintedGraph& tg, const Advertisement& from_v,
                                         int edge_id) {
    const LayeredGraph& g = tg.g;
    const Edge& e = g.edges[edge_id];
    int u = e.from;  // receiver: advertisements flow against traffic edges
    if (std::find(from_v.path.begin(), from_v.path.end(), u) != from_v.path.end())
        return std::nullopt;
    if (device_revisits(g, u, from_v.path)) return std::nullopt;

    Advertisement adv = from_v;
    adv.path.insert(adv.path.begin(), u);
    adv.via_edge = edge_id;
    adv.lead_untaint_run = g.next_untaint_run(u, from_v.lead_untaint_run);
    if (taint::is_prohibited(adv.lead_untaint_run)) return std::nullopt;

    switch (e.label) {
        case EdgeLabel::O:
            adv.cost.ad = e.metrics.ad.value_or(graph_builder::default_ad(NodeProto::Ospf));
            adv.cost.igp_cost += e.metrics.ospf_cost.value_or(1);
            break;
        case EdgeLabel::B:
            adv.cost.ad = e.metrics.ad.value_or(graph_builder::default_ad(NodeProto::Ebgp));
            adv.cost.as_path_len += e.metrics.as_path_increment.value_or(1);
            adv.cost.local_pref = e.metrics.local_pref.value_or(graph_builder::kDefaultLocalPref);
            adv.cost.med = e.metrics.med.value_or(graph_builder::kDefaultMed);
            adv.cost.igp_cost = 0;
            break;
        case EdgeLabel::R:
            // Redistribution re-originates under the receiving protocol; BGP
            // attributes and communities do not survive the crossing.
            adv.cost = PathCost{};
            adv.cost.ad = graph_builder::default_ad(g.nodes[u].proto);
            adv.communities.clear();
            break;
        case EdgeLabel::F:
            // Endpoint attachment: origination at dst-side processes picks up
            // the receiving protocol's AD; src-side reception is transparent.
            if (g.nodes[e.to].kind == NodeKind::Dst) {
                adv.cost = PathCost{};
                adv.cost.ad = graph_builder::default_ad(g.nodes[u].proto);
                adv.path = {u};
                adv.via_edge = kViaOrigin;
            }
            break;
        default:
            return std::nullopt;  // s/p/i edges carry no advertisements
    }
    if (!apply_node_communities(g, u, adv)) return std::nullopt;
    return adv;
}

std::optional<Advertisement> update_cost_ibgp(const TaintedGraph& tg,
                                              const Advertisement& from_v, int u, int v,
                                              int igp_cost) {
    const LayeredGraph& g = tg.g;
    if (std::find(from_v.path.begin(), from_v.path.end(), u) != from_v.path.end())
        return std::nullopt;
    if (device_revisits(g, u, from_v.path)) return std::nullopt;
    (void)v;
    Advertisement adv = from_v;
    adv.path.insert(adv.path.begin(), u);
    adv.via_edge = kViaIbgp;
    adv.lead_untaint_run = g.next_untaint_run(u, from_v.lead_untaint_run);
    if (taint::is_prohibited(adv.lead_untaint_run)) return std::nullopt;
    adv.cost.ad = graph_builder::default_ad(NodeProto::Ibgp);
    adv.cost.igp_cost = igp_cost;  // distance to the announcing peer
    if (!apply_node_communities(g, u, adv)) return std::nullopt;
    return adv;
}

IgpRoute igp_route(const TaintedGraph& tg, int from_node, int to_node, const RunMasks& masks) {
    const LayeredGraph& g = tg.g;
    IgpRoute res;
    if (from_node < 0 || to_node < 0) return res;
    if (g.igp_instance[from_node] < 0 ||
        g.igp_instance[from_node] != g.igp_instance[to_node])
        return res;
    if (from_node == to_node) return {0, from_node, -1};
    // Dijkstra over alive o-edges of the shared instance. Equal-cost ties
    // resolve to the lexicographically smallest (first hop, link) pair so the
    // walk is deterministic.
    std::map<int, int> dist;
    std::map<int, std::pair<int, int>> first;  // node -> (first hop node, first link)
    using Item = std::tuple<int, int>;         // (dist, node)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[from_node] = 0;
    pq.push({0, from_node});
    while (!pq.empty()) {
        auto [d, n] = pq.top();
        pq.pop();
        if (d > dist[n]) continue;
        for (int eid : g.out[n]) {
            const Edge& e = g.edges[eid];
            if (e.label != EdgeLabel::O || !edge_alive(e, masks)) continue;
            if (!node_alive(e.to, masks)) continue;
            int nd = d + e.metrics.ospf_cost.value_or(1);
            auto nf = n == from_node ? std::make_pair(e.to, e.link) : first[n];
            auto it = dist.find(e.to);
            bool improve = it == dist.end() || nd < it->second ||
                           (nd == it->second && nf < first[e.to]);
            if (improve) {
                dist[e.to] = nd;
                first[e.to] = nf;
                pq.push({nd, e.to});
            }
        }
    }
    if (!dist.count(to_node)) return res;
    res.dist = dist[to_node];
    res.first_hop = first[to_node].first;
    res.first_link = first[to_node].second;
    return res;
}

namespace {

struct PeerLists {
    // Per node: (sender node, edge id) pairs; edge id = kViaIbgp for sessions.
    std::vector<std::vector<std::pair<int, int>>> peers;
    std::map<std::pair<int, int>, int> ibgp_cost;  // (receiver, sender) -> IGP dist
};

PeerLists build_peers(const TaintedGraph& tg, const RunMasks& masks) {
    const LayeredGraph& g = tg.g;
    PeerLists pl;
    pl.peers.assign(g.nodes.size(), {});
    for (const auto& e : g.edges) {
        if (!edge_alive(e, masks)) continue;
        if (!node_alive(e.from, masks) || !node_alive(e.to, masks)) continue;
        switch (e.label) {
            case EdgeLabel::O:
            case EdgeLabel::B:
            case EdgeLabel::R:
                pl.peers[e.from].push_back({e.to, e.id});
                break;
            case EdgeLabel::F:
                // dst attachment originates; src attachment aggregates.
                if (g.nodes[e.to].kind == NodeKind::Dst ||
                    g.nodes[e.from].kind == NodeKind::Src)
                    pl.peers[e.from].push_back({e.to, e.id});
                break;
            default:
                break;
        }
    }
    for (const auto& [recv, send] : g.ibgp_sessions) {
        if (!node_alive(recv, masks) || !node_alive(send, masks)) continue;
        IgpRoute r = igp_route(tg, g.underlying_igp[recv], g.underlying_igp[send], masks);
        if (r.dist < 0) continue;  // session down without IGP connectivity
        pl.peers[recv].push_back({send, kViaIbgp});
        pl.ibgp_cost[{recv, send}] = r.dist;
    }
    return pl;
}

void seed_local_ribs(const TaintedGraph& tg, int dst_node, const RunMasks& masks,
                     std::vector<std::optional<Advertisement>>& rib) {
    const LayeredGraph& g = tg.g;
    Advertisement eps;
    eps.path = {dst_node};
    eps.cost = PathCost{};
    eps.cost.ad = 0;
    rib[dst_node] = eps;
    // Static pseudo-processes originate locally while a next-hop link is up.
    for (size_t n = 0; n < g.nodes.size(); ++n) {
        if (g.nodes[n].proto != NodeProto::Static) continue;
        if (!node_alive(static_cast<int>(n), masks)) continue;
        bool usable = false;
        for (int eid : g.out[n]) {
            const Edge& e = g.edges[eid];
            if (e.label == EdgeLabel::S && edge_alive(e, masks) && node_alive(e.to, masks))
                usable = true;
        }
        if (!usable) continue;
        Advertisement adv;
        adv.path = {static_cast<int>(n)};
        adv.cost = PathCost{};
        adv.cost.ad = graph_builder::default_ad(NodeProto::Static);
        rib[n] = adv;
    }
}

}  // namespace

RibState run_tpvp_masked(const TaintedGraph& tg, int dst_node, const RunMasks& masks) {
    const LayeredGraph& g = tg.g;
    if (dst_node < 0 || g.nodes[dst_node].kind != NodeKind::Dst)
        throw MissingDst("run_tpvp requires a dst-attached graph");
    RibState st;
    st.rib.assign(g.nodes.size(), std::nullopt);
    seed_local_ribs(tg, dst_node, masks, st.rib);
    std::vector<char> fixed(g.nodes.size(), 0);
    for (size_t n = 0; n < g.nodes.size(); ++n)
        if (st.rib[n]) fixed[n] = 1;

    PeerLists pl = build_peers(tg, masks);
    const int budget = std::max<int>(16, static_cast<int>(g.nodes.size() * g.nodes.size()));
    bool changed = true;
    while (changed) {
        changed = false;
        if (++st.rounds > budget)
            throw NonConvergence("TPVP did not converge within " + std::to_string(budget) +
                                 " rounds");
        for (size_t u = 0; u < g.nodes.size(); ++u) {
            if (fixed[u] || !node_alive(static_cast<int>(u), masks)) continue;
            std::vector<Advertisement> candidates;
            for (const auto& [v, eid] : pl.peers[u]) {
                if (!st.rib[v]) continue;
                std::optional<Advertisement> adv;
                if (eid == kViaIbgp)
                    adv = update_cost_ibgp(tg, *st.rib[v], static_cast<int>(u), v,
                                           pl.ibgp_cost[{static_cast<int>(u), v}]);
                else
                    adv = update_cost(tg, *st.rib[v], eid);
                if (adv) {
                    st.rib_in[{static_cast<int>(u), v}] = *adv;
                    candidates.push_back(std::move(*adv));
                }
            }
            auto best = choices(candidates);
            if (best != st.rib[u]) {
                st.rib[u] = best;
                changed = true;
            }
        }
    }
    return st;
}

RibState run_tpvp(const TaintedGraph& tg, int dst_node, const FailureScenario& failed) {
    RunMasks masks;
    masks.dead_links = failed.failed_links;
    return run_tpvp_masked(tg, dst_node, masks);
}

std::optional<std::vector<int>> extract_path(const RibState& state, int src_node) {
    if (src_node < 0 || src_node >= static_cast<int>(state.rib.size())) return std::nullopt;
    if (!state.rib[src_node]) return std::nullopt;
    return state.rib[src_node]->path;
}

namespace {

// One forwarding decision: where does `device` send the packet next?
struct HopDecision {
    int deciding_node = -1;
    int next_link = -1;
    std::string next_device;
    bool has_route = false;
};

HopDecision decide_hop(const TaintedGraph& tg, const net_model::NetworkSpec& spec,
                       const std::vector<std::optional<Advertisement>>& rib,
                       const std::string& device, const std::string& vrf,
                       const std::string& dst_prefix, const RunMasks& masks) {
    const LayeredGraph& g = tg.g;
    HopDecision hd;
    std::vector<std::pair<Advertisement, int>> cands;  // (adv, node)
    for (size_t n = 0; n < g.nodes.size(); ++n) {
        const NodeId& id = g.nodes[n];
        if (id.device != device || id.kind != NodeKind::Proc || id.vrf != vrf) continue;
        if (!node_alive(static_cast<int>(n), masks)) continue;
        if (rib[n]) cands.push_back({*rib[n], static_cast<int>(n)});
    }
    if (cands.empty()) return hd;
    std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
        if (a.first == b.first) return a.second < b.second;
        return better(a.first, b.first);
    });
    const Advertisement* adv = &cands[0].first;
    int node = cands[0].second;

    // Redistribution wins resolve to the donor process's entry on this router.
    while (adv->via_edge >= 0 && g.edges[adv->via_edge].label == EdgeLabel::R) {
        node = g.edges[adv->via_edge].to;
        if (!rib[node]) return hd;
        adv = &*rib[node];
    }
    hd.deciding_node = node;
    hd.has_route = true;

    if (g.nodes[node].proto == NodeProto::Static) {
        // Deterministically pick the first usable matching static route.
        const net_model::Device* d = spec.find_device(device);
        for (const auto& s : d->static_routes) {
            if (s.dst_prefix != dst_prefix || s.vrf != vrf) continue;
            for (int li : spec.links_between(device, s.next_hop_router)) {
                if (masks.dead_links.count(li)) continue;
                hd.next_link = li;
                hd.next_device = s.next_hop_router;
                return hd;
            }
        }
        hd.has_route = false;
        return hd;
    }
    if (adv->via_edge == kViaIbgp) {
        int peer = adv->path.size() > 1 ? adv->path[1] : -1;
        if (peer < 0) {
            hd.has_route = false;
            return hd;
        }
        IgpRoute r = igp_route(tg, g.underlying_igp[node], g.underlying_igp[peer], masks);
        if (r.dist < 0) {
            hd.has_route = false;
            return hd;
        }
        hd.next_link = r.first_link;
        hd.next_device = r.first_hop >= 0 ? g.nodes[r.first_hop].device : device;
        return hd;
    }
    if (adv->via_edge >= 0) {
        const Edge& e = g.edges[adv->via_edge];
        if (e.inter_device()) {
            hd.next_link = e.link;
            hd.next_device = g.nodes[e.to].device;
            return hd;
        }
        // Attachment edge: this router originates dst — handled by the caller.
    }
    hd.next_device = device;
    return hd;
}

}  // namespace

bool link_acl_drops(const net_model::NetworkSpec& spec, const net_model::TrafficClass& tc,
                    int link, const std::string& from_dev, const std::string& to_dev) {
    const auto& l = spec.links[link];
    auto iface = [&](const std::string& dev) {
        return l.device_a == dev ? l.interface_a : l.interface_b;
    };
    auto matches = [&](const net_model::AclRule& a) {
        auto pm = [](const std::string& rule, const std::string& v) {
            return rule.empty() || rule == v;
        };
        return pm(a.src_prefix, tc.src_prefix) && pm(a.dst_prefix, tc.dst_prefix);
    };
    if (const auto* d = spec.find_device(from_dev))
        for (const auto& a : d->acls)
            if (a.direction == net_model::AclDirection::Out && a.interface == iface(from_dev) &&
                matches(a))
                return true;
    if (const auto* d = spec.find_device(to_dev))
        for (const auto& a : d->acls)
            if (a.direction == net_model::AclDirection::In && a.interface == iface(to_dev) &&
                matches(a))
                return true;
    return false;
}

WalkResult walk_traffic(const TaintedGraph& tg, const net_model::NetworkSpec& spec,
                        const RibState& state, const RunMasks& masks,
                        const WalkOptions& opts) {
    const LayeredGraph& g = tg.g;
    WalkResult res;
    const net_model::TrafficClass* tc = spec.find_traffic_class(g.tc_name);
    if (!tc) throw UnknownTrafficClass(g.tc_name);
    std::string cur = opts.start_device.empty() ? g.src_device : opts.start_device;
    std::set<std::string> seen{cur};
    res.devices.push_back(cur);
    while (true) {
        if (cur == g.dst_device) {
            res.outcome = WalkOutcome::Delivered;
            return res;
        }
        HopDecision hd = decide_hop(tg, spec, state.rib, cur, g.vrf, tc->dst_prefix, masks);
        if (!hd.has_route || hd.next_link < 0) {
            res.outcome = WalkOutcome::NoRoute;
            res.drop_device = cur;
            return res;
        }
        res.deciding_nodes.push_back(hd.deciding_node);
        if (opts.apply_acl_drops &&
            link_acl_drops(spec, *tc, hd.next_link, cur, hd.next_device)) {
            res.outcome = WalkOutcome::AclDrop;
            res.drop_device = cur;
            return res;
        }
        res.links.push_back(hd.next_link);
        cur = hd.next_device;
        res.devices.push_back(cur);
        if (!seen.insert(cur).second) {
            res.outcome = WalkOutcome::Loop;
            res.drop_device = cur;
            return res;
        }
    }
}

MultiRibState run_tpvp_multipath(const TaintedGraph& tg, int dst_node, const RunMasks& masks) {
    const LayeredGraph& g = tg.g;
    if (dst_node < 0 || g.nodes[dst_node].kind != NodeKind::Dst)
        throw MissingDst("run_tpvp requires a dst-attached graph");
    MultiRibState st;
    st.rib.assign(g.nodes.size(), {});
    std::vector<std::optional<Advertisement>> seeds(g.nodes.size());
    seed_local_ribs(tg, dst_node, masks, seeds);
    std::vector<char> fixed(g.nodes.size(), 0);
    for (size_t n = 0; n < g.nodes.size(); ++n)
        if (seeds[n]) {
            st.rib[n] = {*seeds[n]};
            fixed[n] = 1;
        }
    PeerLists pl = build_peers(tg, masks);
    const int budget = std::max<int>(16, static_cast<int>(g.nodes.size() * g.nodes.size()));
    bool changed = true;
    while (changed) {
        changed = false;
        if (++st.rounds > budget) throw NonConvergence("multipath TPVP did not converge");
        for (size_t u = 0; u < g.nodes.size(); ++u) {
            if (fixed[u] || !node_alive(static_cast<int>(u), masks)) continue;
            std::vector<Advertisement> candidates;
            for (const auto& [v, eid] : pl.peers[u]) {
                for (const auto& adv_v : st.rib[v]) {
                    std::optional<Advertisement> adv;
                    if (eid == kViaIbgp)
                        adv = update_cost_ibgp(tg, adv_v, static_cast<int>(u), v,
                                               pl.ibgp_cost[{static_cast<int>(u), v}]);
                    else
                        adv = update_cost(tg, adv_v, eid);
                    if (adv) candidates.push_back(std::move(*adv));
                }
            }
            auto best = choices_all(candidates);
            if (best != st.rib[u]) {
                st.rib[u] = std::move(best);
                changed = true;
            }
        }
    }
    return st;
}

std::vector<WalkResult> walk_traffic_multipath(const TaintedGraph& tg,
                                               const net_model::NetworkSpec& spec,
                                               const MultiRibState& state,
                                               const RunMasks& masks,
                                               const WalkOptions& opts) {
    const LayeredGraph& g = tg.g;
    const net_model::TrafficClass* tc = spec.find_traffic_class(g.tc_name);
    if (!tc) throw UnknownTrafficClass(g.tc_name);
    std::vector<WalkResult> results;
    constexpr size_t kBranchCap = 256;

    struct Frame {
        std::string device;
        WalkResult partial;
    };
    std::vector<Frame> stack;
    {
        Frame f;
        f.device = opts.start_device.empty() ? g.src_device : opts.start_device;
        f.partial.devices.push_back(f.device);
        stack.push_back(std::move(f));
    }
    while (!stack.empty() && results.size() < kBranchCap) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.device == g.dst_device) {
            f.partial.outcome = WalkOutcome::Delivered;
            results.push_back(std::move(f.partial));
            continue;
        }
        // Gather the full tie-set of forwarding decisions on this router.
        std::vector<Advertisement> cands;
        for (size_t n = 0; n < g.nodes.size(); ++n) {
            const NodeId& id = g.nodes[n];
            if (id.device != f.device || id.kind != NodeKind::Proc || id.vrf != g.vrf)
                continue;
            if (!node_alive(static_cast<int>(n), masks)) continue;
            for (const auto& adv : state.rib[n]) cands.push_back(adv);
        }
        auto ties = choices_all(cands);
        if (ties.empty()) {
            f.partial.outcome = WalkOutcome::NoRoute;
            f.partial.drop_device = f.device;
            results.push_back(std::move(f.partial));
            continue;
        }
        // Expand each tied next hop; duplicates collapse on (next_device,link).
        std::set<std::pair<std::string, int>> expanded;
        for (const auto& adv : ties) {
            std::string next;
            int link = -1;
            if (adv.via_edge == kViaIbgp) {
                int holder = adv.path.empty() ? -1 : adv.path[0];
                int peer = adv.path.size() > 1 ? adv.path[1] : -1;
                if (holder < 0 || peer < 0) continue;
                IgpRoute r = igp_route(tg, g.underlying_igp[holder],
                                       g.underlying_igp[peer], masks);
                if (r.dist < 0) continue;
                next = g.nodes[r.first_hop].device;
                link = r.first_link;
            } else if (adv.via_edge >= 0 && g.edges[adv.via_edge].inter_device()) {
                next = g.nodes[g.edges[adv.via_edge].to].device;
                link = g.edges[adv.via_edge].link;
            } else if (!adv.path.empty() &&
                       g.nodes[adv.path[0]].proto == NodeProto::Static) {
                const net_model::Device* d = spec.find_device(f.device);
                for (const auto& s : d->static_routes) {
                    if (s.dst_prefix != tc->dst_prefix || s.vrf != g.vrf) continue;
                    for (int li : spec.links_between(f.device, s.next_hop_router))
                        if (!masks.dead_links.count(li)) {
                            next = s.next_hop_router;
                            link = li;
                            break;
                        }
                    if (link >= 0) break;
                }
            }
            if (next.empty() || link < 0) continue;
            if (!expanded.insert({next, link}).second) continue;
            if (std::find(f.partial.devices.begin(), f.partial.devices.end(), next) !=
                f.partial.devices.end()) {
                WalkResult loop = f.partial;
                loop.outcome = WalkOutcome::Loop;
                loop.drop_device = next;
                results.push_back(std::move(loop));
                continue;
            }
            WalkResult ext = f.partial;
            if (opts.apply_acl_drops && link_acl_drops(spec, *tc, link, f.device, next)) {
                ext.outcome = WalkOutcome::AclDrop;
                ext.drop_device = f.device;
                results.push_back(std::move(ext));
                continue;
            }
            ext.links.push_back(link);
            ext.devices.push_back(next);
            stack.push_back({next, std::move(ext)});
        }
        if (expanded.empty()) {
            f.partial.outcome = WalkOutcome::NoRoute;
            f.partial.drop_device = f.device;
            results.push_back(std::move(f.partial));
        }
    }
    return results;
}

}  // namespace tiramisu::tpvp
