#pragma once

#include <string>
#include <vector>

#include "tiramisu/net_model.hpp"
#include "tiramisu/verdict.hpp"

namespace tiramisu::policies {

enum class PolicyKind { P1, P2, P3, P4, P5, P6, P7, P8, P9, P10 };

std::string kind_name(PolicyKind k);
PolicyKind kind_from_name(const std::string& name);  // throws UnknownPolicyKind

struct PolicyRequest {
    PolicyKind kind = PolicyKind::P1;
    std::string traffic_class;
    std::string traffic_class_b;  // P8 only
    int k = 1;                    // P3 / P4
    std::string waypoint;         // P2
    std::vector<std::string> waypoints;                // P6
    std::vector<std::vector<std::string>> preference;  // P5
};

// {"policy": "P3", "traffic_class": "tc0", "k": 2, ...}; a document may hold
// one request object or an array of them.
std::vector<PolicyRequest> requests_from_json(const std::string& json_text);
std::string request_to_json(const PolicyRequest& r);

// Routes to the owning verifier, building the graph variants it needs.
Verdict verify(const PolicyRequest& request, const net_model::NetworkSpec& spec);

// P8: two traffic classes never share a physical link (hedge).
Verdict verify_p8_isolated(const std::string& tc_a, const std::string& tc_b,
                           const net_model::NetworkSpec& spec);

// P9: the number of equal-cost best paths matches with and without ACL edges.
Verdict verify_p9_multipath_consistency(const std::string& tc,
                                        const net_model::NetworkSpec& spec);

}  // namespace tiramisu::policies
