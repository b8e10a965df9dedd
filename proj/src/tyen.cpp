#include "tiramisu/tyen.hpp"

#include <algorithm>

#include "tiramisu/errors.hpp"
#include "tiramisu/ilp.hpp"

namespace tiramisu::tyen {

using namespace tiramisu::graph;
using tpvp::PathCost;
using tpvp::RunMasks;

namespace {

bool cost_better(const PathCost& a, const PathCost& b) {
    return std::tuple(a.ad, -a.local_pref, a.as_path_len, a.med, a.igp_cost) <
           std::tuple(b.ad, -b.local_pref, b.as_path_len, b.med, b.igp_cost);
}

bool candidate_order(const RankedPath& a, const RankedPath& b) {
    if (cost_better(a.cost, b.cost)) return true;
    if (cost_better(b.cost, a.cost)) return false;
    return a.devices < b.devices;
}

// Realizes the path the control plane picks once `removed` hedges fail.
std::optional<RankedPath> realize(const TaintedGraph& g,
                                  const net_model::NetworkSpec& spec,
                                  const std::set<int>& removed) {
    RunMasks masks;
    masks.dead_links = removed;
    tpvp::RibState st = tpvp::run_tpvp_masked(g, g.g.dst_node, masks);
    tpvp::WalkResult walk = tpvp::walk_traffic(g, spec, st, masks);
    if (!walk.delivered()) return std::nullopt;
    RankedPath rp;
    rp.devices = walk.devices;
    rp.removed_hedges = removed;
    if (st.rib[g.g.src_node]) rp.cost = st.rib[g.g.src_node]->cost;
    return rp;
}

// Hedges an expected path depends on: any link between consecutive devices.
std::set<int> expected_path_links(const net_model::NetworkSpec& spec,
                                  const std::vector<std::string>& devices) {
    std::set<int> links;
    for (size_t i = 0; i + 1 < devices.size(); ++i)
        for (int l : spec.links_between(devices[i], devices[i + 1])) links.insert(l);
    return links;
}

bool overlaps(const std::set<int>& a, const std::set<int>& b) {
    for (int x : a)
        if (b.count(x)) return true;
    return false;
}

// Links the realized path must lose for a spur at position i to fire: the
// outgoing link of every already-enumerated path sharing the same root.
std::set<int> spur_removals(const net_model::NetworkSpec& spec,
                            const std::vector<RankedPath>& list_a, const RankedPath& p,
                            size_t i) {
    std::set<int> removed = p.removed_hedges;
    auto same_root = [&](const RankedPath& sp) {
        if (sp.devices.size() <= i + 1) return false;
        for (size_t j = 0; j <= i; ++j)
            if (sp.devices[j] != p.devices[j]) return false;
        return true;
    };
    auto block = [&](const RankedPath& sp) {
        for (int l : spec.links_between(sp.devices[i], sp.devices[i + 1]))
            removed.insert(l);
    };
    for (const auto& sp : list_a)
        if (same_root(sp)) block(sp);
    if (same_root(p)) block(p);
    return removed;
}

struct Enumeration {
    // Paths in realized-preference order; enumeration stops at `budget`
    // candidate promotions or when no candidates remain.
    std::vector<RankedPath> paths;
    bool budget_exhausted = false;
};

Enumeration enumerate_paths(const TaintedGraph& g, const net_model::NetworkSpec& spec,
                            int max_level, int budget) {
    Enumeration en;
    auto first = realize(g, spec, {});
    if (!first) return en;
    first->level = 1;
    RankedPath p = *first;
    std::vector<RankedPath> list_a;
    std::vector<RankedPath> list_b;
    std::set<std::vector<std::string>> known{p.devices};

    while (true) {
        en.paths.push_back(p);
        if (static_cast<int>(en.paths.size()) >= budget) {
            en.budget_exhausted = true;
            return en;
        }
        if (max_level > 0 && p.level >= max_level) return en;
        for (size_t i = 0; i + 1 < p.devices.size(); ++i) {
            std::set<int> removed = spur_removals(spec, list_a, p, i);
            if (removed == p.removed_hedges) continue;
            auto np = realize(g, spec, removed);
            if (!np || known.count(np->devices)) continue;
            np->level = p.level + 1;
            known.insert(np->devices);
            list_b.push_back(*np);
        }
        list_a.push_back(p);
        if (list_b.empty()) return en;
        auto next = std::min_element(list_b.begin(), list_b.end(), candidate_order);
        p = *next;
        list_b.erase(next);
    }
}

}  // namespace

Verdict run_tyen(const TaintedGraph& g, const net_model::NetworkSpec& spec,
                 const PreferencePolicy& pref) {
    Verdict v;
    v.policy = "P5";
    if (pref.ordered_paths.empty()) {
        v.holds = true;
        v.diagnostics.push_back("empty preference list");
        return v;
    }
    std::vector<std::set<int>> pref_links;
    for (const auto& path : pref.ordered_paths) {
        pref_links.push_back(expected_path_links(spec, path));
        for (size_t i = 0; i + 1 < path.size(); ++i)
            if (!spec.adjacent(path[i], path[i + 1]))
                v.diagnostics.push_back("preference path hops non-adjacent devices " +
                                        path[i] + "," + path[i + 1]);
    }

    int levels = static_cast<int>(pref.ordered_paths.size());
    Enumeration en = enumerate_paths(g, spec, levels, kEnumerationBudget);

    auto most_pref = [&](const std::set<int>& removed) -> int {
        for (size_t i = 0; i < pref.ordered_paths.size(); ++i)
            if (!overlaps(pref_links[i], removed)) return static_cast<int>(i);
        return -1;
    };

    if (en.paths.empty()) {
        // Nothing is realized even with no failures; the policy expected the
        // most preferred path.
        v.holds = false;
        v.witness = Witness{};
        v.witness->path = pref.ordered_paths.front();
        v.diagnostics.push_back("no path realized; expected the preferred path");
        return v;
    }
    for (const auto& p : en.paths) {
        int mp = most_pref(p.removed_hedges);
        if (mp < 0) continue;  // every expected path lost an edge
        if (p.devices != pref.ordered_paths[mp]) {
            v.holds = false;
            v.witness = Witness{};
            v.witness->path = p.devices;
            std::vector<std::string> scen;
            for (int l : p.removed_hedges) scen.push_back(spec.links[l].id());
            v.witness->scenario = scen;
            std::string exp;
            for (const auto& d : pref.ordered_paths[mp]) exp += (exp.empty() ? "" : "-") + d;
            v.diagnostics.push_back("expected " + exp + " at level " +
                                    std::to_string(p.level));
            return v;
        }
    }
    v.holds = true;
    return v;
}

std::optional<int> min_failures_for_acl_path(const TaintedGraph& g_keep,
                                             const net_model::NetworkSpec& spec,
                                             std::vector<std::string>* diagnostics,
                                             std::vector<int>* witness_links) {
    const net_model::TrafficClass* tc = spec.find_traffic_class(g_keep.g.tc_name);
    if (!tc) throw UnknownTrafficClass(g_keep.g.tc_name);
    Enumeration en = enumerate_paths(g_keep, spec, 0, kEnumerationBudget);
    std::vector<const RankedPath*> previous;
    const RankedPath* poisoned = nullptr;
    for (const auto& p : en.paths) {
        bool hits = false;
        for (size_t i = 0; i + 1 < p.devices.size() && !hits; ++i) {
            // The realized walk crossed exactly one link per hop; test them all
            // since parallel links share endpoints.
            for (int l : spec.links_between(p.devices[i], p.devices[i + 1]))
                if (!p.removed_hedges.count(l) &&
                    tpvp::link_acl_drops(spec, *tc, l, p.devices[i], p.devices[i + 1]))
                    hits = true;
        }
        if (hits) {
            poisoned = &p;
            break;
        }
        previous.push_back(&p);
    }
    if (!poisoned) {
        if (diagnostics)
            diagnostics->push_back(en.budget_exhausted
                                       ? "enumeration budget exhausted with no ACL path"
                                       : "no enumerated path carries a denying ACL");
        return std::nullopt;
    }
    if (previous.empty()) return 0;  // the very best path already drops

    // Minimum hedge hitting set over the M-1 preferred paths.
    ilp::IlpModel m;
    std::map<int, int> var_of_link;
    for (const RankedPath* p : previous)
        for (int l : expected_path_links(spec, p->devices))
            if (!var_of_link.count(l)) {
                int v = m.add_var("F_" + std::to_string(l));
                var_of_link.emplace(l, v);
                m.objective.push_back({1, v});
            }
    for (size_t i = 0; i < previous.size(); ++i) {
        std::vector<ilp::LinTerm> terms;
        for (int l : expected_path_links(spec, previous[i]->devices))
            terms.push_back({1, var_of_link[l]});
        m.add("hit_p" + std::to_string(i), std::move(terms), ilp::Sense::Ge, 1);
    }
    ilp::IlpSolution sol = ilp::solve(m);
    if (sol.status != ilp::SolveStatus::Optimal)
        throw IterationLimit("hitting-set solve failed");
    if (witness_links)
        for (const auto& [l, var] : var_of_link)
            if (sol.assignment[var] == 1) witness_links->push_back(l);
    return static_cast<int>(sol.objective);
}

}  // namespace tiramisu::tyen
