#pragma once

#include <optional>
#include <set>
#include <vector>

#include "tiramisu/graph.hpp"
#include "tiramisu/verdict.hpp"

namespace tiramisu::reach {

struct ReachResult {
    std::set<int> visited;
    bool reached = false;  // dst in visited
};

// Taint-aware depth first search: explores outgoing edges but abandons any
// extension whose consecutive-untainted run reaches 3. Visitation is keyed on
// (node, best run seen) so a node pruned under a high run can be revisited
// with a lower one.
ReachResult tdfs(const graph::TaintedGraph& g, int root);

struct SearchOptions {
    const std::vector<char>* alive_edge = nullptr;  // by edge id; null = all alive
    std::vector<char> removed_node;                 // by node; skipped entirely
    int must_use_edge = -1;                         // path must cross this edge
    bool use_communities = true;
};

// Core validity engine: finds a traffic-direction path from src to any target
// that (a) never accumulates 3 consecutive untainted nodes and (b) survives
// community processing in advertisement direction — a node blocking community
// c kills the path when some later node adds c with no remover (and no
// redistribution crossing, which strips all communities) strictly between.
std::optional<std::vector<int>> find_valid_path(const graph::TaintedGraph& g, int src,
                                                const std::vector<int>& targets,
                                                const SearchOptions& opts = {});

// Community-aware reachability; false iff no valid path exists.
bool comm_tdfs(const graph::TaintedGraph& g, int src, int dst,
               const SearchOptions& opts = {});

// Checks an explicit node path against edge existence, the untaint-run rule
// and the community rule. Used by tests and by candidate validation.
bool is_valid_path(const graph::TaintedGraph& g, const std::vector<int>& node_path);

// Collapses a node-level path to its device-level sequence (endpoint sentinel
// nodes dropped, consecutive same-device nodes merged).
std::vector<std::string> device_path(const graph::LayeredGraph& g,
                                     const std::vector<int>& node_path);

// P1: src and dst always blocked.
Verdict verify_p1_always_blocked(const graph::TaintedGraph& g);

// P2: every path traverses the waypoint device.
Verdict verify_p2_always_waypoint(const graph::TaintedGraph& g, const std::string& waypoint);

// P6: waypoints are traversed in chain order.
Verdict verify_p6_waypoint_chain(const graph::TaintedGraph& g,
                                 const std::vector<std::string>& chain);

// P10: no traffic is forwarded into a drop (ACL on a reachable forwarding
// path, static route whose next hop cannot deliver, or a router none of whose
// processes can ever know a route).
Verdict verify_p10_no_blackholes(const graph::TaintedGraph& acl_removed,
                                 const graph::TaintedGraph& keep_acl,
                                 const net_model::NetworkSpec& spec);

}  // namespace tiramisu::reach
