#pragma once

#include "tiramisu/graph.hpp"
#include "tiramisu/net_model.hpp"

namespace tiramisu::graph_builder {

// Compiles a validated NetworkSpec into the base multilayer hedge graph:
// one node per (router, process, vrf), per (switch, VLAN) and per router FIB,
// inter-device edges per physical link (o/b/p), intra-device edges for
// redistribution (r), iBGP-to-IGP resolution (i) and process<->FIB (f).
graph::LayeredGraph build_base_graph(const net_model::NetworkSpec& spec);

// Specializes the base graph for one traffic class: drops edges denied by
// ACLs (unless keep_acl_edges, which marks them instead) or blocked by route
// filters, adds static-route edges, attaches src/dst endpoint nodes and
// instantiates per-node community sets.
graph::LayeredGraph build_traffic_class_graph(const graph::LayeredGraph& base,
                                              const net_model::TrafficClass& tc,
                                              const net_model::NetworkSpec& spec,
                                              bool keep_acl_edges = false);

// Default administrative distances used when the description is silent.
int default_ad(graph::NodeProto proto);

constexpr int kDefaultLocalPref = 100;
constexpr int kDefaultMed = 0;

}  // namespace tiramisu::graph_builder
