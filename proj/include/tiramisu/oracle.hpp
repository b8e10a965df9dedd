#pragma once

#include <vector>

#include "tiramisu/net_model.hpp"
#include "tiramisu/policies.hpp"
#include "tiramisu/tpvp.hpp"
#include "tiramisu/verdict.hpp"

namespace tiramisu::oracle {

using tpvp::FailureScenario;

// All link subsets of size <= max_failures, by size then lexicographic order.
std::vector<FailureScenario> enumerate_scenarios(const net_model::NetworkSpec& spec,
                                                 int max_failures);

// One control-plane convergence + data-plane walk. The control plane ignores
// ACLs (keep-ACL graph); the walk drops at denying ACLs.
struct ScenarioOutcome {
    FailureScenario scenario;
    bool converged = true;
    tpvp::WalkResult walk;
};

std::vector<ScenarioOutcome> replay_all(const net_model::NetworkSpec& spec,
                                        const std::string& tc_name, int max_failures);

// Decides a policy by its definition via exhaustive replay; ground truth for
// every fast-path verdict at desk scale. Non-convergent scenarios are skipped
// with a loud diagnostic.
Verdict oracle_verify(const policies::PolicyRequest& request,
                      const net_model::NetworkSpec& spec, int max_failures);

}  // namespace tiramisu::oracle
