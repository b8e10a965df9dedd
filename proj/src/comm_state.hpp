#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "tiramisu/graph.hpp"

namespace tiramisu::internal {

// Bitmask view of per-node community actions, restricted to communities that
// some node blocks — only those can invalidate a path.
struct CommIndex {
    std::vector<std::string> blockable;   // bit index -> community name
    std::vector<uint32_t> add, rem, blk;  // per node

    explicit CommIndex(const graph::LayeredGraph& g) {
        std::set<std::string> names;
        for (const auto& c : g.comms)
            for (const auto& b : c.blocked) names.insert(b);
        blockable.assign(names.begin(), names.end());
        add.assign(g.nodes.size(), 0);
        rem.assign(g.nodes.size(), 0);
        blk.assign(g.nodes.size(), 0);
        for (size_t n = 0; n < g.nodes.size(); ++n) {
            for (size_t i = 0; i < blockable.size(); ++i) {
                uint32_t bit = 1u << i;
                if (g.comms[n].added.count(blockable[i])) add[n] |= bit;
                if (g.comms[n].removed.count(blockable[i])) rem[n] |= bit;
                if (g.comms[n].blocked.count(blockable[i])) blk[n] |= bit;
            }
        }
    }
};

}  // namespace tiramisu::internal
