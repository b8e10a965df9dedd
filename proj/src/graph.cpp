#include "tiramisu/graph.hpp"

#include <algorithm>

#include <json.hpp>

namespace tiramisu::graph {

using nlohmann::json;

char label_char(EdgeLabel l) {
    switch (l) {
        case EdgeLabel::F: return 'f';
        case EdgeLabel::B: return 'b';
        case EdgeLabel::O: return 'o';
        case EdgeLabel::S: return 's';
        case EdgeLabel::R: return 'r';
        case EdgeLabel::I: return 'i';
        case EdgeLabel::P: return 'p';
    }
    return '?';
}

std::string NodeId::str() const {
    switch (kind) {
        case NodeKind::Src: return "src";
        case NodeKind::Dst: return "dst";
        case NodeKind::Fib: return device + ".fib";
        case NodeKind::Vlan: return device + ".vlan" + std::to_string(vlan);
        case NodeKind::Proc: {
            std::string s = device + "." + proc;
            if (vrf != "default_vrf") s += "@" + vrf;
            return s;
        }
    }
    return "?";
}

int LayeredGraph::node_index(const NodeId& id) const {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == id) return static_cast<int>(i);
    return -1;
}

std::string LayeredGraph::node_name(int n) const { return nodes[n].str(); }

std::vector<int> LayeredGraph::nodes_of_device(const std::string& device) const {
    std::vector<int> out_nodes;
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].device == device) out_nodes.push_back(static_cast<int>(i));
    return out_nodes;
}

int LayeredGraph::next_untaint_run(int node, int run_so_far) const {
    NodeKind k = nodes[node].kind;
    if (k == NodeKind::Vlan || k == NodeKind::Src || k == NodeKind::Dst)
        return run_so_far;  // layer-2 transit and endpoints carry no RIB
    return is_tainted(node) ? 0 : run_so_far + 1;
}

void LayeredGraph::rebuild_adjacency() {
    out.assign(nodes.size(), {});
    in.assign(nodes.size(), {});
    for (const auto& e : edges) {
        out[e.from].push_back(e.id);
        in[e.to].push_back(e.id);
    }
    hedges.clear();
    for (const auto& e : edges)
        if (e.link >= 0) hedges[e.link].push_back(e.id);
}

void LayeredGraph::renumber_edges_sorted() {
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.from, a.to, a.label, a.link) <
               std::tie(b.from, b.to, b.label, b.link);
    });
    for (size_t i = 0; i < edges.size(); ++i) edges[i].id = static_cast<int>(i);
    rebuild_adjacency();
}

std::string to_json(const LayeredGraph& g, bool pretty) {
    json out;
    out["nodes"] = json::array();
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        json nj;
        nj["id"] = i;
        nj["name"] = g.nodes[i].str();
        nj["device"] = g.nodes[i].device;
        if (g.taint_filled) nj["tainted"] = g.taint[i] != 0;
        if (i < g.comms.size() && !g.comms[i].empty()) {
            const auto& c = g.comms[i];
            if (!c.added.empty()) nj["ac"] = c.added;
            if (!c.removed.empty()) nj["rc"] = c.removed;
            if (!c.matched.empty()) {
                json mc = json::array();
                for (const auto& [comm, act] : c.matched) {
                    json a{{"community", comm}};
                    switch (act.verb) {
                        case net_model::CommunityVerb::Block: a["action"] = "block"; break;
                        case net_model::CommunityVerb::SetLocalPref:
                            a["action"] = "set_local_pref";
                            a["value"] = act.value;
                            break;
                        case net_model::CommunityVerb::SetMed:
                            a["action"] = "set_med";
                            a["value"] = act.value;
                            break;
                        default: break;
                    }
                    mc.push_back(a);
                }
                nj["mc"] = mc;
            }
        }
        out["nodes"].push_back(nj);
    }
    out["edges"] = json::array();
    for (const auto& e : g.edges) {
        json ej;
        ej["id"] = e.id;
        ej["from"] = g.nodes[e.from].str();
        ej["to"] = g.nodes[e.to].str();
        ej["label"] = std::string(1, label_char(e.label));
        if (e.link >= 0) ej["link"] = e.link;
        if (e.acl_deny) ej["acl_deny"] = true;
        json m;
        if (e.metrics.ad) m["ad"] = *e.metrics.ad;
        if (e.metrics.local_pref) m["local_pref"] = *e.metrics.local_pref;
        if (e.metrics.as_path_increment) m["as_path_increment"] = *e.metrics.as_path_increment;
        if (e.metrics.med) m["med"] = *e.metrics.med;
        if (e.metrics.ospf_cost) m["ospf_cost"] = *e.metrics.ospf_cost;
        if (!m.empty()) ej["metrics"] = m;
        out["edges"].push_back(ej);
    }
    out["hedges"] = json::object();
    for (const auto& [link, ids] : g.hedges)
        out["hedges"][std::to_string(link)] = ids;
    if (g.src_node >= 0) {
        out["src_node"] = g.src_node;
        out["dst_node"] = g.dst_node;
        out["traffic_class"] = g.tc_name;
    }
    return pretty ? out.dump(2) : out.dump();
}

}  // namespace tiramisu::graph
