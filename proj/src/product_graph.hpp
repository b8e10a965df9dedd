#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "comm_state.hpp"
#include "tiramisu/graph.hpp"
#include "tiramisu/taint.hpp"

namespace tiramisu::internal {

// Advertisement-direction expansion of a traffic-class graph. States are
// (node, carried blockable communities, untaint run); transitions follow
// reversed traffic edges applying the block/add/remove rule, stripping
// communities across redistribution, and pruning prohibited runs. A dst-to-src
// state path corresponds exactly to a valid traffic path, so cut and length
// questions become plain reachability/flow questions here, while every state
// copy of an edge still shares its hedge's failure variable.
struct ProductGraph {
    struct PNode {
        int base;
        uint32_t carried;
        int run;
    };
    struct PEdge {
        int from, to;
        int base_edge;
    };

    std::vector<PNode> nodes;
    std::vector<PEdge> edges;
    std::vector<std::vector<int>> out, in;  // state -> product edge ids
    int start = -1;                          // dst state
    std::vector<int> terminals;              // states whose base is src
};

inline ProductGraph build_product(const graph::TaintedGraph& tg) {
    const graph::LayeredGraph& g = tg.g;
    CommIndex ci(g);
    ProductGraph pg;
    std::map<std::tuple<int, uint32_t, int>, int> index;
    auto intern = [&](int base, uint32_t carried, int run) {
        auto key = std::make_tuple(base, carried, run);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(pg.nodes.size());
        index.emplace(key, id);
        pg.nodes.push_back({base, carried, run});
        return id;
    };

    pg.start = intern(g.dst_node, 0, 0);
    std::vector<int> work{pg.start};
    while (!work.empty()) {
        int s = work.back();
        work.pop_back();
        auto [base, carried, run] = std::tuple(pg.nodes[s].base, pg.nodes[s].carried,
                                               pg.nodes[s].run);
        if (base == g.src_node) continue;  // advertisement consumed at src
        for (int eid : g.in[base]) {       // advertisement flows dst -> src
            const graph::Edge& e = g.edges[eid];
            int u = e.from;
            uint32_t c = e.label == graph::EdgeLabel::R ? 0u : carried;
            if (c & ci.blk[u]) continue;  // u blocks an arriving community
            uint32_t c2 = (c | ci.add[u]) & ~ci.rem[u];
            int run2 = g.next_untaint_run(u, run);
            if (run2 > taint::kMaxUntaintRun) continue;
            size_t before = pg.nodes.size();
            int t = intern(u, c2, run2);
            pg.edges.push_back({s, t, eid});
            if (pg.nodes.size() > before) work.push_back(t);
        }
    }
    pg.out.assign(pg.nodes.size(), {});
    pg.in.assign(pg.nodes.size(), {});
    for (size_t i = 0; i < pg.edges.size(); ++i) {
        pg.out[pg.edges[i].from].push_back(static_cast<int>(i));
        pg.in[pg.edges[i].to].push_back(static_cast<int>(i));
    }
    for (size_t i = 0; i < pg.nodes.size(); ++i)
        if (pg.nodes[i].base == g.src_node) pg.terminals.push_back(static_cast<int>(i));
    return pg;
}

}  // namespace tiramisu::internal
