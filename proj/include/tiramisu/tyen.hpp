#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tiramisu/graph.hpp"
#include "tiramisu/tpvp.hpp"
#include "tiramisu/verdict.hpp"

namespace tiramisu::tyen {

// A path the control plane realizes once the hedges in removed_hedges fail.
struct RankedPath {
    std::vector<std::string> devices;
    int level = 1;
    std::set<int> removed_hedges;  // eRemoved, at hedge (link) granularity
    tpvp::PathCost cost;
};

// Expected paths, most preferred first, as device sequences.
struct PreferencePolicy {
    std::vector<std::vector<std::string>> ordered_paths;
};

// P5 verification: Yen-style enumeration with the path-vector protocol as the
// shortest-path engine and hedge-aware removals. At each promotion the
// realized path must equal the most preferred expected path whose links are
// not among the removals that forced it.
Verdict run_tyen(const graph::TaintedGraph& g, const net_model::NetworkSpec& spec,
                 const PreferencePolicy& pref);

// Enumerates realized paths in preference order over the keep-ACL graph until
// one crosses a denying ACL (the M-th). Returns the minimum number of hedge
// failures that kill all M-1 preferred paths, or nullopt when no enumerated
// path carries an ACL within the budget.
std::optional<int> min_failures_for_acl_path(const graph::TaintedGraph& g_keep_acl,
                                             const net_model::NetworkSpec& spec,
                                             std::vector<std::string>* diagnostics = nullptr,
                                             std::vector<int>* witness_links = nullptr);

// Enumeration budget before giving up on finding an ACL-poisoned path.
constexpr int kEnumerationBudget = 50;

}  // namespace tiramisu::tyen
