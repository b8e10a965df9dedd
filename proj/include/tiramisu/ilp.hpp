#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tiramisu/graph.hpp"
#include "tiramisu/verdict.hpp"

namespace tiramisu::ilp {

struct LinTerm {
    int coef = 0;
    int var = -1;
    bool operator==(const LinTerm&) const = default;
};

enum class Sense { Le, Ge, Eq };

struct LinConstraint {
    std::string name;
    std::vector<LinTerm> terms;
    Sense sense = Sense::Le;
    int rhs = 0;
    bool operator==(const LinConstraint&) const = default;
};

// All variables are binary.
struct IlpModel {
    bool maximize = false;
    std::vector<LinTerm> objective;
    std::vector<std::string> var_names;
    std::vector<LinConstraint> constraints;

    int add_var(const std::string& name);
    void add(const std::string& name, std::vector<LinTerm> terms, Sense sense, int rhs);
    // x = AND(terms): x <= t_i, x >= sum(t) - (n-1)
    void add_and(const std::string& name, int x, const std::vector<LinTerm>& terms);
    // x = OR(terms): x >= t_i, x <= sum(t)
    void add_or(const std::string& name, int x, const std::vector<int>& terms);
    void fix(const std::string& name, int x, int value);
    size_t num_vars() const { return var_names.size(); }

    bool operator==(const IlpModel&) const = default;
};

enum class SolveStatus { Optimal, Infeasible, IterationLimit };

struct IlpSolution {
    long long objective = 0;
    std::vector<int> assignment;
    SolveStatus status = SolveStatus::Infeasible;
};

struct SolveOptions {
    long long node_budget = 1'000'000;
};

// Deterministic branch-and-bound over binary variables with bound-consistency
// propagation and objective pruning. Optimal for desk-scale models.
IlpSolution solve(const IlpModel& model, const SolveOptions& opts = {});

// Replays an assignment against every constraint.
bool satisfies(const IlpModel& model, const std::vector<int>& assignment);

// CPLEX LP text format.
std::string export_lp(const IlpModel& model);
IlpModel parse_lp(const std::string& text);

// ---- Hedge min-cut -------------------------------------------------------
//
// Advertisement-direction cut model over the validity-expanded graph: nodes
// are (graph node, carried communities, untaint run) states so that community
// blocking and path prohibition are exact path properties, while every edge
// of a hedge shares one failure variable.

struct MincutOptions {
    // Test-only fault injection: drops the failure term from the propagation
    // constraint so failures stop cutting advertisements.
    bool debug_flip_flow_constraint = false;
};

struct MincutModel {
    IlpModel model;
    std::map<int, int> fvar_of_link;  // link index -> F variable
};

MincutModel build_mincut_ilp(const graph::TaintedGraph& g,
                             const MincutOptions& opts = {});

// Convenience: build + solve; returns the optimal number of failed hedges and
// the failing links of one optimal cut.
struct MincutResult {
    long long cut = 0;
    std::vector<int> failed_links;
    SolveStatus status = SolveStatus::Optimal;
};
MincutResult solve_mincut(const graph::TaintedGraph& g, const SolveOptions& sopts = {},
                          const MincutOptions& mopts = {});

// ---- Longest / shortest valid path ---------------------------------------

enum class PathSense { Maximize, Minimize };

struct LongestPathModel {
    IlpModel model;
    std::vector<int> avar_base_edge;   // A variable -> base edge id (-1 none)
    std::vector<int> avar_from_state;  // A variable -> product state index
    std::vector<int> avar_to_state;
    int num_states = 0;
};

LongestPathModel build_longest_path_ilp(const graph::TaintedGraph& g, PathSense sense);

struct PathLengthResult {
    bool feasible = false;
    int length = 0;                 // inter-device edges traversed
    std::vector<int> base_edges;    // one optimal path, adv direction
    SolveStatus status = SolveStatus::Optimal;
};

// Solves with lazy cycle-elimination cuts (flow conservation alone admits
// disconnected cycles that inflate the maximum).
PathLengthResult solve_path_length(const graph::TaintedGraph& g, PathSense sense,
                                   const SolveOptions& opts = {});

// ---- Policies backed by the ILPs ------------------------------------------

// P3: reachable under < K link failures; min(L, N) >= K where N is the hedge
// min-cut with ACL edges removed and L the fewest failures steering traffic
// onto an ACL-poisoned path (from the Yen machinery).
Verdict verify_p3_reachable_k(const graph::TaintedGraph& g_no_acl,
                              const graph::TaintedGraph& g_keep_acl,
                              const net_model::NetworkSpec& spec, int k);

// P4: every path's inter-device hop count is <= K.
Verdict verify_p4_bounded_length(const graph::TaintedGraph& g, int k);

// P7: all paths share one length.
Verdict verify_p7_equal_bound(const graph::TaintedGraph& g);

}  // namespace tiramisu::ilp
