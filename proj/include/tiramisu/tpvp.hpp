#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tiramisu/graph.hpp"
#include "tiramisu/net_model.hpp"

namespace tiramisu::tpvp {

// A set of physical links that fail together with every edge in their hedges.
struct FailureScenario {
    std::set<int> failed_links;  // indices into NetworkSpec::links

    bool operator<(const FailureScenario& o) const { return failed_links < o.failed_links; }
};

struct PathCost {
    int ad = 0;
    int local_pref = 100;
    int as_path_len = 0;
    int med = 0;
    int igp_cost = 0;

    bool operator==(const PathCost&) const = default;
};

// Sentinel values for Advertisement::via_edge.
constexpr int kViaOrigin = -1;   // locally originated (dst attachment / static)
constexpr int kViaIbgp = -2;     // learned over an iBGP session from path[1]

struct Advertisement {
    std::vector<int> path;  // receiver first, then sender, ..., origin process
    PathCost cost;
    std::set<std::string> communities;
    int lead_untaint_run = 0;  // consecutive untainted nodes at the path head
    int via_edge = kViaOrigin; // arrival edge id, or a sentinel above

    bool operator==(const Advertisement& o) const {
        return path == o.path && cost == o.cost && communities == o.communities &&
               via_edge == o.via_edge;
    }
};

struct RibState {
    std::vector<std::optional<Advertisement>> rib;  // per node
    // Most recent advertisement accepted from each peer, keyed (receiver, sender).
    std::map<std::pair<int, int>, Advertisement> rib_in;
    int rounds = 0;
};

// Extra removals beyond a failure scenario (used by the Yen machinery).
struct RunMasks {
    std::set<int> dead_links;
    std::vector<char> dead_nodes;  // by node id; empty = none
};

// Total preference order over advertisements: lowest AD, highest local-pref,
// shortest AS path, lowest MED, lowest IGP cost, then deterministic
// next-hop/path tie-break. Returns true when a is strictly preferred.
bool better(const Advertisement& a, const Advertisement& b);

// Best candidate or null; deterministic under input permutation.
std::optional<Advertisement> choices(const std::vector<Advertisement>& candidates);

// All candidates tied with the best on every metric (multipath support).
std::vector<Advertisement> choices_all(const std::vector<Advertisement>& candidates);

// Extends v's advertisement across one graph edge onto its start node
// (advertisements flow against traffic edges). Returns null when the
// extension loops, creates a prohibited run, or is blocked by a community.
std::optional<Advertisement> update_cost(const graph::TaintedGraph& g,
                                         const Advertisement& from_v, int edge_id);

// iBGP reception: u imports peer v's advertisement at AD 200 with the IGP
// distance from u's router to v's router as the IGP metric.
std::optional<Advertisement> update_cost_ibgp(const graph::TaintedGraph& g,
                                              const Advertisement& from_v, int u, int v,
                                              int igp_cost);

// Runs the path-vector computation to a fixed point, processing nodes in a
// fixed round-robin order. Throws NonConvergence past the round budget.
RibState run_tpvp(const graph::TaintedGraph& g, int dst_node, const FailureScenario& failed);
RibState run_tpvp_masked(const graph::TaintedGraph& g, int dst_node, const RunMasks& masks);

// rib(src)'s path in traffic direction, or null.
std::optional<std::vector<int>> extract_path(const RibState& state, int src_node);

// Exact traffic path: per physical hop, forward by that router's best FIB
// entry, resolving iBGP next hops through the underlying IGP. This is where
// a route's IGP resolution can short-circuit at an intermediate router.
enum class WalkOutcome { Delivered, NoRoute, AclDrop, Loop };

struct WalkResult {
    WalkOutcome outcome = WalkOutcome::NoRoute;
    std::vector<std::string> devices;    // devices visited, src router first
    std::vector<int> deciding_nodes;     // FIB-winning node per visited router
    std::vector<int> links;              // physical links crossed
    std::string drop_device;             // for NoRoute/AclDrop
    bool delivered() const { return outcome == WalkOutcome::Delivered; }
    int hops() const { return static_cast<int>(links.size()); }
};

struct WalkOptions {
    bool apply_acl_drops = false;  // data-plane deny ACLs drop the packet
    std::string start_device;      // default: the graph's src router
};

WalkResult walk_traffic(const graph::TaintedGraph& g, const net_model::NetworkSpec& spec,
                        const RibState& state, const RunMasks& masks,
                        const WalkOptions& opts = {});

// Multipath variants for P9: ribs hold the full tie-set per node.
struct MultiRibState {
    std::vector<std::vector<Advertisement>> rib;
    int rounds = 0;
};
MultiRibState run_tpvp_multipath(const graph::TaintedGraph& g, int dst_node,
                                 const RunMasks& masks);
// All distinct delivered device-paths under multipath forwarding.
std::vector<WalkResult> walk_traffic_multipath(const graph::TaintedGraph& g,
                                               const net_model::NetworkSpec& spec,
                                               const MultiRibState& state,
                                               const RunMasks& masks,
                                               const WalkOptions& opts = {});

// True when a deny ACL on either end interface of `link` matches the traffic
// class for packets flowing from_dev -> to_dev.
bool link_acl_drops(const net_model::NetworkSpec& spec, const net_model::TrafficClass& tc,
                    int link, const std::string& from_dev, const std::string& to_dev);

// IGP shortest-path helper shared with the walk and the session setup.
struct IgpRoute {
    int dist = -1;       // -1 = unreachable
    int first_hop = -1;  // node id of the first-hop process
    int first_link = -1;
};
IgpRoute igp_route(const graph::TaintedGraph& g, int from_node, int to_node,
                   const RunMasks& masks);

}  // namespace tiramisu::tpvp
