#include <algorithm>

#include "product_graph.hpp"
#include "tiramisu/errors.hpp"
#include "tiramisu/ilp.hpp"

namespace tiramisu::ilp {

using namespace tiramisu::graph;
using tiramisu::internal::ProductGraph;

namespace {

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s)
        out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return out;
}

}  // namespace

MincutModel build_mincut_ilp(const TaintedGraph& tg, const MincutOptions& opts) {
    const LayeredGraph& g = tg.g;
    if (g.src_node < 0 || g.dst_node < 0)
        throw MissingEndpoints("min-cut needs a traffic-class graph with src and dst");
    ProductGraph pg = internal::build_product(tg);

    MincutModel mc;
    IlpModel& m = mc.model;
    m.maximize = false;

    // One failure variable per hedge; every state copy of a hedge edge shares it.
    for (const auto& pe : pg.edges) {
        int link = g.edges[pe.base_edge].link;
        if (link < 0 || mc.fvar_of_link.count(link)) continue;
        mc.fvar_of_link.emplace(link, -1);
    }
    for (auto& [link, var] : mc.fvar_of_link) {
        var = m.add_var("F_" + sanitize(std::to_string(link)));
        m.objective.push_back({1, var});
    }

    std::vector<int> rvar(pg.nodes.size());
    for (size_t s = 0; s < pg.nodes.size(); ++s)
        rvar[s] = m.add_var("R_s" + std::to_string(s));
    std::vector<int> avar(pg.edges.size());
    for (size_t e = 0; e < pg.edges.size(); ++e)
        avar[e] = m.add_var("A_e" + std::to_string(e));

    // dst originates; the advertisement must not reach src.
    m.fix("eq2_dst", rvar[pg.start], 1);
    for (int t : pg.terminals) m.fix("eq3_src_s" + std::to_string(t), rvar[t], 0);

    // Reachability: a node hears the advertisement iff some in-edge carries it.
    for (size_t s = 0; s < pg.nodes.size(); ++s) {
        if (static_cast<int>(s) == pg.start) continue;
        std::vector<int> ins;
        for (int pe : pg.in[s]) ins.push_back(avar[pe]);
        if (ins.empty()) {
            m.fix("eq4_s" + std::to_string(s), rvar[s], 0);
            continue;
        }
        m.add_or("eq4_s" + std::to_string(s), rvar[s], ins);
    }

    // Propagation: an edge carries the advertisement iff its start heard it
    // and the underlying physical link did not fail. Community blocks and
    // prohibited runs are structural here: dead transitions have no edge.
    for (size_t e = 0; e < pg.edges.size(); ++e) {
        const auto& pe = pg.edges[e];
        int link = g.edges[pe.base_edge].link;
        std::vector<LinTerm> conj{{1, rvar[pe.from]}};
        if (link >= 0 && !opts.debug_flip_flow_constraint)
            conj.push_back({-1, mc.fvar_of_link[link]});
        m.add_and("eq5_e" + std::to_string(e), avar[e], conj);
    }
    return mc;
}

MincutResult solve_mincut(const TaintedGraph& g, const SolveOptions& sopts,
                          const MincutOptions& mopts) {
    MincutModel mc = build_mincut_ilp(g, mopts);
    IlpSolution sol = solve(mc.model, sopts);
    MincutResult res;
    res.status = sol.status;
    if (sol.status == SolveStatus::Infeasible) return res;
    res.cut = sol.objective;
    for (const auto& [link, var] : mc.fvar_of_link)
        if (sol.assignment[var] == 1) res.failed_links.push_back(link);
    return res;
}

}  // namespace tiramisu::ilp
