#pragma once

#include "tiramisu/graph.hpp"

namespace tiramisu::taint {

// Taint marks nodes that may hold forwarding information toward dst; an
// untainted node is guaranteed not to. Propagation runs in advertisement
// direction (against traffic edges), seeded at dst's attached processes and
// at static pseudo-processes that carry a matching route:
//   - across eBGP adjacencies and redistribution edges,
//   - between iBGP peers,
//   - flooding through whole IGP instances.
// FIB nodes are tainted iff any process on their router is.
graph::TaintedGraph propagate_taints(graph::LayeredGraph g, int dst_node);

// Convenience overload using the graph's own dst attachment.
graph::TaintedGraph propagate_taints(graph::LayeredGraph g);

// A path with >= 3 consecutive untainted nodes cannot materialize under any
// failure scenario.
bool is_prohibited(int consecutive_untainted);

constexpr int kMaxUntaintRun = 2;

}  // namespace tiramisu::taint
