#include <algorithm>

#include "tiramisu/errors.hpp"
#include "tiramisu/ilp.hpp"
#include "tiramisu/reach.hpp"
#include "tiramisu/tyen.hpp"

namespace tiramisu::ilp {

using namespace tiramisu::graph;

namespace {

// Traffic-direction device path from advertisement-direction base edges.
std::vector<std::string> devices_of_advertisement_path(const LayeredGraph& g,
                                                       const std::vector<int>& base_edges) {
    std::vector<int> nodes;
    for (auto it = base_edges.rbegin(); it != base_edges.rend(); ++it) {
        const Edge& e = g.edges[*it];
        if (nodes.empty()) nodes.push_back(e.to);
        nodes.push_back(e.from);
    }
    std::reverse(nodes.begin(), nodes.end());
    return reach::device_path(g, nodes);
}

}  // namespace

Verdict verify_p3_reachable_k(const TaintedGraph& g_no_acl, const TaintedGraph& g_keep_acl,
                              const net_model::NetworkSpec& spec, int k) {
    Verdict v;
    v.policy = "P3";
    MincutResult n = solve_mincut(g_no_acl);
    if (n.status == SolveStatus::IterationLimit)
        throw IterationLimit("min-cut solver budget exhausted");
    std::vector<int> l_witness;
    std::optional<int> l;
    if (!g_keep_acl.g.acl_denied_edges.empty())
        l = tyen::min_failures_for_acl_path(g_keep_acl, spec, &v.diagnostics, &l_witness);
    long long effective = l ? std::min<long long>(*l, n.cut) : n.cut;
    v.diagnostics.push_back("mincut N=" + std::to_string(n.cut) +
                            (l ? " acl L=" + std::to_string(*l) : " acl L=none"));
    v.holds = effective >= k;
    if (!v.holds) {
        v.witness = Witness{};
        std::vector<std::string> scen;
        const std::vector<int>& links = (l && *l <= n.cut) ? l_witness : n.failed_links;
        for (int li : links) scen.push_back(spec.links[li].id());
        v.witness->scenario = scen;
    }
    return v;
}

Verdict verify_p4_bounded_length(const TaintedGraph& g, int k) {
    Verdict v;
    v.policy = "P4";
    PathLengthResult longest = solve_path_length(g, PathSense::Maximize);
    if (longest.status == SolveStatus::IterationLimit)
        throw IterationLimit("path-length solver budget exhausted");
    if (!longest.feasible) {
        v.holds = true;
        v.diagnostics.push_back("no valid path exists");
        return v;
    }
    v.diagnostics.push_back("longest path " + std::to_string(longest.length));
    v.holds = longest.length <= k;
    if (!v.holds) {
        v.witness = Witness{};
        v.witness->path = devices_of_advertisement_path(g.g, longest.base_edges);
    }
    return v;
}

Verdict verify_p7_equal_bound(const TaintedGraph& g) {
    Verdict v;
    v.policy = "P7";
    PathLengthResult longest = solve_path_length(g, PathSense::Maximize);
    if (!longest.feasible) {
        v.holds = true;
        v.diagnostics.push_back("no valid path exists");
        return v;
    }
    PathLengthResult shortest = solve_path_length(g, PathSense::Minimize);
    v.diagnostics.push_back("longest " + std::to_string(longest.length) + ", shortest " +
                            std::to_string(shortest.length));
    v.holds = longest.length == shortest.length;
    if (!v.holds) {
        v.witness = Witness{};
        v.witness->path = devices_of_advertisement_path(g.g, longest.base_edges);
    }
    return v;
}

}  // namespace tiramisu::ilp
