#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tiramisu/errors.hpp"

namespace tiramisu::net_model {

// Declarative network description. This is the engine's configuration source:
// devices, physical links, routing processes, policy knobs and traffic
// classes, all in one JSON document (see schemas/network_spec.schema.json).

enum class ProcProtocol { Ebgp, Ibgp, Ospf };

enum class DeviceKind { Router, Switch };

enum class AclDirection { In, Out };

enum class CommunityVerb { Add, Remove, Block, SetLocalPref, SetMed };

struct CommunityAction {
    CommunityVerb verb;
    std::string community;
    int value = 0;           // SetLocalPref / SetMed only
    std::string dst_prefix;  // empty = applies to every destination prefix
};

struct RouteFilter {
    std::string dst_prefix;  // advertisements for this prefix are blocked
};

struct RoutingProcess {
    std::string name;  // unique per device; defaults to the protocol string
    ProcProtocol protocol = ProcProtocol::Ospf;
    std::string vrf = "default_vrf";
    int as_number = -1;                         // BGP only
    std::vector<std::string> ibgp_peers;        // BGP only, device names
    std::map<std::string, int> interface_costs; // OSPF only; doubles as the
                                                // set of OSPF-enabled interfaces
    std::vector<std::string> redistributes_from;
    std::vector<RouteFilter> route_filters;
    std::vector<CommunityAction> community_actions;
    std::map<std::string, int> local_pref_in;  // neighbor device -> local-pref
    std::map<std::string, int> med_out;        // neighbor device -> MED

    bool is_bgp() const { return protocol != ProcProtocol::Ospf; }
};

struct VlanMembership {
    std::string interface;
    int vlan = 0;
};

// Only deny rules are modeled; permit is the default. An empty prefix field
// matches any prefix.
struct AclRule {
    std::string interface;
    AclDirection direction = AclDirection::In;
    std::string src_prefix;
    std::string dst_prefix;
};

struct StaticRoute {
    std::string dst_prefix;
    std::string next_hop_router;
    std::string vrf = "default_vrf";
};

struct Device {
    std::string name;
    DeviceKind kind = DeviceKind::Router;
    std::vector<std::string> interfaces;
    std::vector<std::string> vrfs{"default_vrf"};
    std::vector<RoutingProcess> processes;
    std::vector<VlanMembership> vlans;  // switches only
    std::vector<AclRule> acls;
    std::vector<StaticRoute> static_routes;

    const RoutingProcess* find_process(const std::string& name) const;
    bool has_interface(const std::string& ifname) const;
    std::optional<int> vlan_of(const std::string& ifname) const;
};

struct PhysicalLink {
    std::string device_a, interface_a;
    std::string device_b, interface_b;

    // Canonical id with endpoints in lexicographic order, e.g. "A:eth0--B:eth1".
    std::string id() const;
    bool touches(const std::string& device) const {
        return device_a == device || device_b == device;
    }
};

struct TrafficClass {
    std::string name;
    std::string src_prefix, dst_prefix;
    std::string src_router, dst_router;
    std::string vrf = "default_vrf";
};

struct Diagnostic {
    std::string device;   // empty for document-level issues
    std::string field;
    std::string message;
};

struct NetworkSpec {
    std::vector<Device> devices;
    std::vector<PhysicalLink> links;
    std::vector<TrafficClass> traffic_classes;

    const Device* find_device(const std::string& name) const;
    const TrafficClass* find_traffic_class(const std::string& name) const;
    // Indices into `links` of all physical links between two devices.
    std::vector<int> links_between(const std::string& a, const std::string& b) const;
    bool adjacent(const std::string& a, const std::string& b) const {
        return !links_between(a, b).empty();
    }
};

// Parses and validates a serialized network description.
// Throws SchemaError / ReferenceError / InvariantError.
NetworkSpec load_spec(const std::string& json_text);
NetworkSpec load_spec_file(const std::string& path);

std::string serialize(const NetworkSpec& spec);

// Empty result iff every domain invariant holds. Never throws on semantic
// problems; diagnostics are the output.
std::vector<Diagnostic> validate_spec(const NetworkSpec& spec);

bool valid_prefix(const std::string& prefix);

}  // namespace tiramisu::net_model
