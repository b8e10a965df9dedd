#include "tiramisu/taint.hpp"

#include <map>

#include "tiramisu/errors.hpp"

namespace tiramisu::taint {

using namespace tiramisu::graph;

bool is_prohibited(int consecutive_untainted) {
    return consecutive_untainted > kMaxUntaintRun;
}

TaintedGraph propagate_taints(LayeredGraph g, int dst_node) {
    if (dst_node < 0 || dst_node >= static_cast<int>(g.nodes.size()) ||
        g.nodes[dst_node].kind != NodeKind::Dst)
        throw MissingDst("graph has no attached dst node");

    std::vector<char> t(g.nodes.size(), 0);

    // Seeds: processes advertising dst, and static routes matching it.
    for (int e : g.in[dst_node]) t[g.edges[e].from] = 1;
    for (const auto& e : g.edges)
        if (e.label == EdgeLabel::S) t[e.from] = 1;

    bool changed = true;
    while (changed) {
        changed = false;
        auto mark = [&](int n) {
            if (!t[n]) {
                t[n] = 1;
                changed = true;
            }
        };
        // Advertisements flow against traffic edges: the edge's start imports
        // from its end. Only adjacency (o/b), redistribution (r) and static
        // (s) edges carry routing information; f and i edges are intra-router
        // resolution and p edges are transparent layer 2.
        for (const auto& e : g.edges) {
            switch (e.label) {
                case EdgeLabel::B:
                case EdgeLabel::O:
                case EdgeLabel::R:
                case EdgeLabel::S:
                    if (t[e.to]) mark(e.from);
                    break;
                default: break;
            }
        }
        for (const auto& [recv, send] : g.ibgp_sessions)
            if (t[send]) mark(recv);
        // An IGP floods everything it learns through the whole instance.
        std::map<int, bool> inst_tainted;
        for (size_t i = 0; i < g.nodes.size(); ++i)
            if (g.igp_instance[i] >= 0 && t[i]) inst_tainted[g.igp_instance[i]] = true;
        for (size_t i = 0; i < g.nodes.size(); ++i)
            if (g.igp_instance[i] >= 0 && inst_tainted[g.igp_instance[i]])
                mark(static_cast<int>(i));
    }

    // FIBs aggregate every RIB on the router.
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        if (g.nodes[i].kind != NodeKind::Fib) continue;
        for (size_t j = 0; j < g.nodes.size(); ++j)
            if (g.nodes[j].kind == NodeKind::Proc && g.nodes[j].device == g.nodes[i].device &&
                t[j])
                t[i] = 1;
    }
    if (g.src_node >= 0) t[g.src_node] = 1;
    t[dst_node] = 1;

    g.taint = std::move(t);
    g.taint_filled = true;
    return TaintedGraph{std::move(g)};
}

TaintedGraph propagate_taints(LayeredGraph g) {
    int dst = g.dst_node;
    return propagate_taints(std::move(g), dst);
}

}  // namespace tiramisu::taint
