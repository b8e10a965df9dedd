#include <algorithm>
#include <map>
#include <set>

#include "product_graph.hpp"
#include "tiramisu/errors.hpp"
#include "tiramisu/ilp.hpp"

namespace tiramisu::ilp {

using namespace tiramisu::graph;
using tiramisu::internal::ProductGraph;

LongestPathModel build_longest_path_ilp(const TaintedGraph& tg, PathSense sense) {
    const LayeredGraph& g = tg.g;
    if (g.src_node < 0 || g.dst_node < 0)
        throw MissingEndpoints("path-length ILP needs a traffic-class graph");
    ProductGraph pg = internal::build_product(tg);

    LongestPathModel lm;
    IlpModel& m = lm.model;
    m.maximize = sense == PathSense::Maximize;
    lm.num_states = static_cast<int>(pg.nodes.size());

    std::vector<int> avar(pg.edges.size());
    for (size_t e = 0; e < pg.edges.size(); ++e) {
        avar[e] = m.add_var("A_e" + std::to_string(e));
        lm.avar_base_edge.push_back(pg.edges[e].base_edge);
        lm.avar_from_state.push_back(pg.edges[e].from);
        lm.avar_to_state.push_back(pg.edges[e].to);
        // Only inter-device edges count toward path length.
        if (g.edges[pg.edges[e].base_edge].inter_device())
            m.objective.push_back({1, avar[e]});
    }

    // dst sends exactly one advertisement; src receives exactly one.
    std::vector<LinTerm> dst_out;
    for (int pe : pg.out[pg.start]) dst_out.push_back({1, avar[pe]});
    if (dst_out.empty() || pg.terminals.empty()) {
        // No valid path at all; pin the model infeasible so callers see it.
        int v = m.add_var("infeasible");
        m.fix("no_path_lo", v, 0);
        m.add("no_path_hi", {{1, v}}, Sense::Ge, 1);
        return lm;
    }
    m.add("eq_dst", std::move(dst_out), Sense::Eq, 1);
    std::vector<LinTerm> src_in;
    for (int t : pg.terminals)
        for (int pe : pg.in[t]) src_in.push_back({1, avar[pe]});
    m.add("eq_src", std::move(src_in), Sense::Eq, 1);

    // Flow conservation elsewhere, one visit per state, one entry per device.
    std::set<int> terminal_set(pg.terminals.begin(), pg.terminals.end());
    for (size_t s = 0; s < pg.nodes.size(); ++s) {
        if (static_cast<int>(s) == pg.start || terminal_set.count(static_cast<int>(s)))
            continue;
        std::vector<LinTerm> flow;
        for (int pe : pg.in[s]) flow.push_back({1, avar[pe]});
        for (int pe : pg.out[s]) flow.push_back({-1, avar[pe]});
        if (!flow.empty()) m.add("flow_s" + std::to_string(s), std::move(flow), Sense::Eq, 0);
        std::vector<LinTerm> cap;
        for (int pe : pg.in[s]) cap.push_back({1, avar[pe]});
        if (!cap.empty()) m.add("cap_s" + std::to_string(s), std::move(cap), Sense::Le, 1);
    }
    // An advertisement visits a device at most once (forwarding is memoryless).
    std::map<std::string, std::vector<LinTerm>> dev_in;
    for (size_t e = 0; e < pg.edges.size(); ++e) {
        const Edge& be = g.edges[pg.edges[e].base_edge];
        const std::string& from_dev = g.nodes[be.to].device;   // adv source device
        const std::string& to_dev = g.nodes[be.from].device;   // adv target device
        if (to_dev.empty() || from_dev == to_dev) continue;
        dev_in[to_dev].push_back({1, avar[e]});
    }
    for (auto& [dev, terms] : dev_in)
        m.add("dev_" + dev, std::move(terms), Sense::Le, 1);
    return lm;
}

namespace {

// Follows the unit flow from the start state; returns product edge ids on the
// dst->src path, or nullopt if the flow stops early (shouldn't happen when
// the flow constraints hold).
std::optional<std::vector<int>> trace_flow(const LongestPathModel& lm,
                                           const ProductGraph& pg,
                                           const std::vector<int>& assignment,
                                           const std::vector<int>& avar) {
    std::vector<int> path;
    int cur = pg.start;
    std::set<int> seen{cur};
    std::set<int> terminal_set(pg.terminals.begin(), pg.terminals.end());
    while (!terminal_set.count(cur)) {
        int next_edge = -1;
        for (int pe : pg.out[cur])
            if (assignment[avar[pe]] == 1) {
                next_edge = pe;
                break;
            }
        if (next_edge < 0) return std::nullopt;
        path.push_back(next_edge);
        cur = pg.edges[next_edge].to;
        if (!seen.insert(cur).second) return std::nullopt;
    }
    return path;
}

}  // namespace

PathLengthResult solve_path_length(const TaintedGraph& tg, PathSense sense,
                                   const SolveOptions& opts) {
    const LayeredGraph& g = tg.g;
    ProductGraph pg = internal::build_product(tg);
    LongestPathModel lm = build_longest_path_ilp(tg, sense);
    PathLengthResult res;
    std::vector<int> avar(pg.edges.size());
    for (size_t e = 0; e < pg.edges.size(); ++e) avar[e] = static_cast<int>(e);

    // Lazy cycle elimination: flow conservation admits circulation disjoint
    // from the dst->src path; cut any cycle the solution smuggles in.
    for (int round = 0; round < 64; ++round) {
        IlpSolution sol = solve(lm.model, opts);
        if (sol.status == SolveStatus::Infeasible) {
            res.feasible = false;
            res.status = sol.status;
            return res;
        }
        res.status = sol.status;
        auto path = trace_flow(lm, pg, sol.assignment, avar);
        if (path) {
            long long on_path = 0;
            for (int pe : *path)
                if (g.edges[pg.edges[pe].base_edge].inter_device()) ++on_path;
            if (on_path == sol.objective || sol.status == SolveStatus::IterationLimit) {
                res.feasible = true;
                res.length = static_cast<int>(sol.objective);
                res.base_edges.clear();
                for (int pe : *path) res.base_edges.push_back(pg.edges[pe].base_edge);
                return res;
            }
        }
        // Locate circulation: flow edges not on the traced path form cycles.
        std::set<int> path_edges;
        if (path) path_edges.insert(path->begin(), path->end());
        std::vector<int> stray;
        for (size_t e = 0; e < pg.edges.size(); ++e)
            if (sol.assignment[avar[e]] == 1 && !path_edges.count(static_cast<int>(e)))
                stray.push_back(static_cast<int>(e));
        if (stray.empty()) {
            res.feasible = true;
            res.length = static_cast<int>(sol.objective);
            return res;
        }
        // Walk one cycle among stray edges and forbid it.
        std::map<int, int> out_edge;
        for (int e : stray) out_edge[pg.edges[e].from] = e;
        int cur = pg.edges[stray.front()].from;
        std::set<int> seen;
        while (!seen.count(cur) && out_edge.count(cur)) {
            seen.insert(cur);
            cur = pg.edges[out_edge[cur]].to;
        }
        if (!out_edge.count(cur)) throw IterationLimit("stray flow is not a cycle");
        std::vector<LinTerm> cut;
        int start = cur, len = 0;
        do {
            int e = out_edge[cur];
            cut.push_back({1, avar[e]});
            cur = pg.edges[e].to;
            ++len;
        } while (cur != start);
        lm.model.add("subtour_" + std::to_string(round), std::move(cut), Sense::Le, len - 1);
    }
    throw IterationLimit("cycle elimination did not terminate");
}

}  // namespace tiramisu::ilp
