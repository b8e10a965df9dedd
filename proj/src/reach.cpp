#include "tiramisu/reach.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>

#include "tiramisu/errors.hpp"
#include "tiramisu/taint.hpp"

namespace tiramisu::reach {

using namespace tiramisu::graph;

ReachResult tdfs(const TaintedGraph& tg, int root) {
    const LayeredGraph& g = tg.g;
    ReachResult res;
    // best[n] = lowest untaint run this node has been entered with, 4 = never.
    std::vector<int> best(g.nodes.size(), 4);
    std::vector<std::pair<int, int>> stack;  // (node, run at entry)
    int run0 = g.next_untaint_run(root, 0);
    stack.push_back({root, run0});
    while (!stack.empty()) {
        auto [u, run] = stack.back();
        stack.pop_back();
        if (run > taint::kMaxUntaintRun) continue;
        if (run >= best[u]) continue;
        best[u] = run;
        res.visited.insert(u);
        for (int eid : g.out[u]) {
            int v = g.edges[eid].to;
            stack.push_back({v, g.next_untaint_run(v, run)});
        }
    }
    res.reached = g.dst_node >= 0 && res.visited.count(g.dst_node) > 0;
    return res;
}

namespace {

// Community bookkeeping for the validity search. Communities only matter when
// somebody blocks them; everything else is index bookkeeping.
struct CommIndex {
    std::vector<std::string> blockable;               // index -> community name
    std::vector<uint32_t> add, rem, blk;              // per node bitmasks

    explicit CommIndex(const LayeredGraph& g) {
        std::set<std::string> names;
        for (const auto& c : g.comms)
            for (const auto& b : c.blocked) names.insert(b);
        blockable.assign(names.begin(), names.end());
        add.assign(g.nodes.size(), 0);
        rem.assign(g.nodes.size(), 0);
        blk.assign(g.nodes.size(), 0);
        for (size_t n = 0; n < g.nodes.size(); ++n) {
            for (size_t i = 0; i < blockable.size(); ++i) {
                uint32_t bit = 1u << i;
                if (g.comms[n].added.count(blockable[i])) add[n] |= bit;
                if (g.comms[n].removed.count(blockable[i])) rem[n] |= bit;
                if (g.comms[n].blocked.count(blockable[i])) blk[n] |= bit;
            }
        }
    }
};

// Full search state. Run is part of the identity: a node pruned under a high
// untaint run may still be usable via a prefix entering with a lower run.
struct State {
    int node;
    uint32_t armed;
    uint8_t crossed;
    int run;

    auto key() const { return std::make_tuple(node, armed, crossed, run); }
};

}  // namespace

std::optional<std::vector<int>> find_valid_path(const TaintedGraph& tg, int src,
                                                const std::vector<int>& targets,
                                                const SearchOptions& opts) {
    const LayeredGraph& g = tg.g;
    if (!g.taint_filled) throw InvariantError("find_valid_path needs a tainted graph");
    CommIndex ci(g);
    if (ci.blockable.size() > 30) throw InvariantError("too many blocked communities");
    const bool use_comm = opts.use_communities && !ci.blockable.empty();
    const bool need_cross = opts.must_use_edge >= 0;

    std::vector<char> is_target(g.nodes.size(), 0);
    for (int t : targets) is_target[t] = 1;
    if (!opts.removed_node.empty() && opts.removed_node[src]) return std::nullopt;

    using Key = std::tuple<int, uint32_t, uint8_t, int>;
    // Lowest run seen per (node, armed, crossed): lower runs dominate.
    std::map<std::tuple<int, uint32_t, uint8_t>, int> best;
    std::map<Key, Key> parent;  // each key is assigned exactly once

    auto arm_transition = [&](uint32_t armed, int v) -> std::optional<uint32_t> {
        if (!use_comm) return 0u;
        uint32_t eff_add = ci.add[v] & ~ci.rem[v];
        if (armed & eff_add) return std::nullopt;  // an armed blocker dies here
        return (armed & ~ci.rem[v]) | ci.blk[v];
    };

    std::deque<State> queue;
    auto push = [&](State s, const State* from) {
        if (s.run > taint::kMaxUntaintRun) return;
        auto dom = std::make_tuple(s.node, s.armed, s.crossed);
        auto it = best.find(dom);
        if (it != best.end() && it->second <= s.run) return;
        best[dom] = s.run;
        if (from) parent.emplace(s.key(), from->key());
        queue.push_back(s);
    };

    auto arm0 = arm_transition(0, src);
    if (!arm0) return std::nullopt;
    push({src, *arm0, static_cast<uint8_t>(need_cross ? 0 : 1), g.next_untaint_run(src, 0)},
         nullptr);

    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        if (is_target[s.node] && s.crossed) {
            std::vector<int> path;
            Key cur = s.key();
            path.push_back(std::get<0>(cur));
            auto it = parent.find(cur);
            while (it != parent.end()) {
                cur = it->second;
                path.push_back(std::get<0>(cur));
                it = parent.find(cur);
            }
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (int eid : g.out[s.node]) {
            const Edge& e = g.edges[eid];
            if (opts.alive_edge && !(*opts.alive_edge)[eid]) continue;
            int v = e.to;
            if (!opts.removed_node.empty() && opts.removed_node[v]) continue;
            // Redistribution strips every community from the advertisement.
            uint32_t armed = e.label == EdgeLabel::R ? 0u : s.armed;
            auto armed2 = arm_transition(armed, v);
            if (!armed2) continue;
            uint8_t crossed = s.crossed || (eid == opts.must_use_edge);
            push({v, *armed2, crossed, g.next_untaint_run(v, s.run)}, &s);
        }
    }
    return std::nullopt;
}

bool comm_tdfs(const TaintedGraph& g, int src, int dst, const SearchOptions& opts) {
    return find_valid_path(g, src, {dst}, opts).has_value();
}

bool is_valid_path(const TaintedGraph& tg, const std::vector<int>& node_path) {
    const LayeredGraph& g = tg.g;
    if (node_path.empty()) return false;
    CommIndex ci(g);
    int run = 0;
    uint32_t armed = 0;
    for (size_t i = 0; i < node_path.size(); ++i) {
        int v = node_path[i];
        EdgeLabel label = EdgeLabel::F;
        if (i > 0) {
            bool found = false;
            for (int eid : g.out[node_path[i - 1]]) {
                if (g.edges[eid].to == v) {
                    label = g.edges[eid].label;
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
        run = g.next_untaint_run(v, run);
        if (run > taint::kMaxUntaintRun) return false;
        if (label == EdgeLabel::R) armed = 0;
        uint32_t eff_add = ci.add[v] & ~ci.rem[v];
        if (armed & eff_add) return false;
        armed = (armed & ~ci.rem[v]) | ci.blk[v];
    }
    return true;
}

std::vector<std::string> device_path(const LayeredGraph& g, const std::vector<int>& node_path) {
    std::vector<std::string> devs;
    for (int n : node_path) {
        const NodeId& id = g.nodes[n];
        if (id.kind == NodeKind::Src || id.kind == NodeKind::Dst) continue;
        if (devs.empty() || devs.back() != id.device) devs.push_back(id.device);
    }
    return devs;
}

namespace {

Witness path_witness(const LayeredGraph& g, const std::vector<int>& path) {
    Witness w;
    w.path = device_path(g, path);
    std::vector<std::string> names;
    for (int n : path) names.push_back(g.node_name(n));
    w.node_path = names;
    return w;
}

}  // namespace

Verdict verify_p1_always_blocked(const TaintedGraph& g) {
    Verdict v;
    v.policy = "P1";
    auto path = find_valid_path(g, g.g.src_node, {g.g.dst_node});
    v.holds = !path.has_value();
    if (path) v.witness = path_witness(g.g, *path);
    return v;
}

Verdict verify_p2_always_waypoint(const TaintedGraph& g, const std::string& waypoint) {
    Verdict v;
    v.policy = "P2";
    auto wp_nodes = g.g.nodes_of_device(waypoint);
    if (wp_nodes.empty()) throw UnknownDevice(waypoint);
    SearchOptions opts;
    opts.removed_node.assign(g.g.nodes.size(), 0);
    for (int n : wp_nodes) opts.removed_node[n] = 1;
    auto path = find_valid_path(g, g.g.src_node, {g.g.dst_node}, opts);
    v.holds = !path.has_value();
    if (path) v.witness = path_witness(g.g, *path);
    return v;
}

Verdict verify_p6_waypoint_chain(const TaintedGraph& g, const std::vector<std::string>& chain) {
    Verdict v;
    v.policy = "P6";
    v.holds = true;
    std::vector<std::vector<int>> chain_nodes;
    for (const auto& dev : chain) {
        auto nodes = g.g.nodes_of_device(dev);
        if (nodes.empty()) throw UnknownDevice(dev);
        chain_nodes.push_back(nodes);
    }
    for (size_t i = 0; i < chain.size(); ++i) {
        SearchOptions opts;
        opts.removed_node.assign(g.g.nodes.size(), 0);
        for (int n : chain_nodes[i]) opts.removed_node[n] = 1;
        std::vector<int> sources{g.g.src_node};
        for (size_t j = 0; j < i; ++j)
            sources.insert(sources.end(), chain_nodes[j].begin(), chain_nodes[j].end());
        std::vector<int> targets{g.g.dst_node};
        for (size_t l = i + 1; l < chain.size(); ++l)
            targets.insert(targets.end(), chain_nodes[l].begin(), chain_nodes[l].end());
        for (int s : sources) {
            if (opts.removed_node[s]) continue;
            auto path = find_valid_path(g, s, targets, opts);
            if (path) {
                v.holds = false;
                v.witness = path_witness(g.g, *path);
                v.diagnostics.push_back("chain element " + chain[i] + " bypassed");
                return v;
            }
        }
    }
    return v;
}

Verdict verify_p10_no_blackholes(const TaintedGraph& acl_removed, const TaintedGraph& keep_acl,
                                 const net_model::NetworkSpec& spec) {
    Verdict v;
    v.policy = "P10";
    v.holds = true;
    const LayeredGraph& gk = keep_acl.g;
    const LayeredGraph& gr = acl_removed.g;

    // (i) ACL drops: some failure steers traffic across an interface whose ACL
    // denies it. Witness the routers carrying the ACL'd edge.
    for (int eid : gk.acl_denied_edges) {
        SearchOptions opts;
        opts.must_use_edge = eid;
        auto path = find_valid_path(keep_acl, gk.src_node, {gk.dst_node}, opts);
        if (path) {
            v.holds = false;
            v.witness = Witness{};
            v.witness->device = gk.device_of(gk.edges[eid].from);
            v.diagnostics.push_back("ACL on " + gk.node_name(gk.edges[eid].from) + "->" +
                                    gk.node_name(gk.edges[eid].to) +
                                    " drops traffic that can reach it");
            return v;
        }
    }

    const net_model::TrafficClass* tc = spec.find_traffic_class(gr.tc_name);

    // (ii) static routes whose next hop cannot deliver.
    if (tc) {
        for (const auto& d : spec.devices) {
            for (const auto& s : d.static_routes) {
                if (s.dst_prefix != tc->dst_prefix || s.vrf != tc->vrf) continue;
                if (d.name == gr.dst_device) continue;
                auto d_nodes = gr.nodes_of_device(d.name);
                bool src_reaches = d.name == gr.src_device;
                for (int n : d_nodes)
                    if (!src_reaches && find_valid_path(acl_removed, gr.src_node, {n}))
                        src_reaches = true;
                if (!src_reaches) continue;
                bool nh_reaches = false;
                for (int n : gr.nodes_of_device(s.next_hop_router))
                    if (find_valid_path(acl_removed, n, {gr.dst_node})) nh_reaches = true;
                if (!nh_reaches) {
                    v.holds = false;
                    v.witness = Witness{};
                    v.witness->device = d.name;
                    v.diagnostics.push_back("static route on " + d.name + " forwards to " +
                                            s.next_hop_router + " which cannot reach dst");
                    return v;
                }
            }
        }
    }

    // (iii) routers that can never know a route but can still receive traffic.
    for (const auto& d : spec.devices) {
        if (d.kind != net_model::DeviceKind::Router) continue;
        if (d.name == gr.src_device || d.name == gr.dst_device) continue;
        auto nodes = gr.nodes_of_device(d.name);
        if (nodes.empty()) continue;
        bool any_tainted = false;
        for (int n : nodes)
            if (gr.taint[n]) any_tainted = true;
        if (any_tainted) continue;
        if (find_valid_path(acl_removed, gr.src_node, nodes)) {
            v.holds = false;
            v.witness = Witness{};
            v.witness->device = d.name;
            v.diagnostics.push_back("traffic can reach " + d.name +
                                    " which never holds a route toward dst");
            return v;
        }
    }
    return v;
}

}  // namespace tiramisu::reach
