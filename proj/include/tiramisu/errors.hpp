#pragma once

#include <stdexcept>
#include <string>

namespace tiramisu {

// Malformed input document (bad JSON, wrong types, missing required keys).
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// A name in the document does not resolve (device, interface, process, ...).
struct ReferenceError : std::runtime_error {
    explicit ReferenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// A domain invariant is violated (e.g. OSPF cost 0, cross-AS iBGP peering).
struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnknownTrafficClass : std::runtime_error {
    explicit UnknownTrafficClass(const std::string& name)
        : std::runtime_error("unknown traffic class: " + name) {}
};

struct UnknownDevice : std::runtime_error {
    explicit UnknownDevice(const std::string& name)
        : std::runtime_error("unknown device: " + name) {}
};

struct UnknownPolicyKind : std::runtime_error {
    explicit UnknownPolicyKind(const std::string& kind)
        : std::runtime_error("unknown policy kind: " + kind) {}
};

struct MissingEndpoints : std::runtime_error {
    explicit MissingEndpoints(const std::string& msg) : std::runtime_error(msg) {}
};

struct MissingDst : std::runtime_error {
    explicit MissingDst(const std::string& msg) : std::runtime_error(msg) {}
};

// Path-vector computation did not reach a fixed point within its round budget.
struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

// Solver or enumeration budget exhausted before an answer was proven.
struct IterationLimit : std::runtime_error {
    explicit IterationLimit(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tiramisu
