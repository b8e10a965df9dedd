#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tiramisu {

// Concrete object certifying a policy violation. At most one field is set.
struct Witness {
    std::optional<std::vector<std::string>> path;       // device-level path
    std::optional<std::vector<std::string>> node_path;  // layered-node detail
    std::optional<std::vector<std::string>> scenario;   // failed link ids
    std::optional<std::string> device;
    std::optional<std::string> hedge;
};

struct Verdict {
    std::string policy;
    bool holds = false;
    std::optional<Witness> witness;
    std::vector<std::string> diagnostics;
};

std::string to_json(const Verdict& v, bool pretty = true);

}  // namespace tiramisu
