#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tiramisu/net_model.hpp"

namespace tiramisu::graph {

// Multilayer multi-attribute hedge graph. Nodes exist per (device, routing
// process, vrf), per (switch, VLAN), and per router FIB; traffic-class graphs
// additionally carry src/dst endpoint nodes. Edge direction encodes traffic
// flow src -> dst; advertisements flow the opposite way.

enum class NodeKind { Proc, Vlan, Fib, Src, Dst };

enum class NodeProto { Ebgp, Ibgp, Ospf, Static, None };

// f=FIB, b=eBGP, o=IGP, s=static, r=redistribute, i=iBGP, p=physical.
enum class EdgeLabel { F, B, O, S, R, I, P };

char label_char(EdgeLabel l);

struct NodeId {
    std::string device;
    NodeKind kind = NodeKind::Proc;
    NodeProto proto = NodeProto::None;  // Proc nodes
    std::string vrf;                    // Proc nodes
    int vlan = -1;                      // Vlan nodes
    std::string proc;                   // process name, Proc nodes

    std::string str() const;
    auto key() const { return std::tie(device, kind, proto, vrf, vlan, proc); }
    bool operator<(const NodeId& o) const { return key() < o.key(); }
    bool operator==(const NodeId& o) const { return key() == o.key(); }
};

struct MetricVector {
    std::optional<int> ad;
    std::optional<int> local_pref;
    std::optional<int> as_path_increment;
    std::optional<int> med;
    std::optional<int> ospf_cost;

    bool operator==(const MetricVector&) const = default;
};

struct Edge {
    int id = -1;
    int from = -1, to = -1;
    EdgeLabel label = EdgeLabel::F;
    MetricVector metrics;
    int link = -1;        // index into NetworkSpec::links; -1 for intra-device
    bool acl_deny = false;  // kept-but-denied edge (keep_acl_edges builds only)

    bool inter_device() const { return link >= 0; }
};

// Community action sets per node, instantiated per traffic class.
struct NodeCommunities {
    std::set<std::string> added;    // ac
    std::set<std::string> removed;  // rc
    std::map<std::string, net_model::CommunityAction> matched;  // mc keyed by community
    std::set<std::string> blocked;  // matched entries with a block action

    bool empty() const { return added.empty() && removed.empty() && matched.empty(); }
};

struct LayeredGraph {
    std::vector<NodeId> nodes;  // index is the node ref everywhere below
    std::vector<Edge> edges;
    std::vector<std::vector<int>> out;  // node -> outgoing edge ids
    std::vector<std::vector<int>> in;   // node -> incoming edge ids

    // Hedge groups: link index -> ids of every edge riding that physical link.
    std::map<int, std::vector<int>> hedges;

    std::vector<NodeCommunities> comms;  // per node; empty sets in base graphs
    std::vector<char> taint;             // per node; filled by the taint pass
    bool taint_filled = false;

    // iBGP peer sessions as (bgp node, bgp node) pairs, both directions listed once.
    std::vector<std::pair<int, int>> ibgp_sessions;
    // For BGP proc nodes: the same-device same-vrf IGP proc node, -1 if none.
    std::vector<int> underlying_igp;
    // IGP instance id per node (-1 for non-OSPF nodes). Two OSPF processes share
    // an instance iff connected through OSPF-enabled links.
    std::vector<int> igp_instance;

    int src_node = -1, dst_node = -1;  // traffic-class graphs only
    std::string tc_name, src_device, dst_device, vrf;

    // Edges removed for ACLs during specialization (absent from `edges` unless
    // the graph was built with keep_acl_edges, in which case they carry
    // acl_deny=true instead and this lists their ids).
    std::vector<int> acl_denied_edges;

    int node_index(const NodeId& id) const;   // -1 if absent
    const NodeId& node(int n) const { return nodes[n]; }
    std::string node_name(int n) const;
    const std::string& device_of(int n) const { return nodes[n].device; }
    std::vector<int> nodes_of_device(const std::string& device) const;
    bool is_tainted(int n) const { return taint_filled && taint[n] != 0; }

    // Untaint run-length bookkeeping shared by every traversal: VLAN and
    // endpoint nodes are transparent (no RIB to consult, no reset either).
    int next_untaint_run(int node, int run_so_far) const;

    void rebuild_adjacency();
    void renumber_edges_sorted();
};

// Wrapper asserting the taint overlay has been computed.
struct TaintedGraph {
    LayeredGraph g;
};

std::string to_json(const LayeredGraph& g, bool pretty = true);

}  // namespace tiramisu::graph
