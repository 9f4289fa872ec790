#ifndef NECRED_NETWORK_HPP
#define NECRED_NETWORK_HPP

#include "necred/common.hpp"

#include <json.hpp>

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace necred {

/// A channel. Capacity is in bits per channel use; a length-n code carries
/// n * capacity bits per edge. Parallel edges are allowed and are told apart
/// by id.
struct Edge {
    std::string id;
    std::string tail;
    std::string head;
    int capacity = 1;
};

/// Raw graph description as read from a file. May be structurally invalid;
/// Topology::validate turns it into something usable.
struct Network {
    std::vector<std::string> nodes;
    std::vector<Edge> edges;
};

/// Validated directed acyclic multigraph with index structures and a
/// topological node order. Immutable after construction; safe to share
/// across threads.
class Topology {
  public:
    /// Checks node/edge id uniqueness, endpoint membership, capacity
    /// positivity and acyclicity. The error for a cyclic graph names the
    /// offending cycle.
    static Topology validate(Network net);

    const Network& net() const { return net_; }
    int node_count() const { return static_cast<int>(net_.nodes.size()); }
    int edge_count() const { return static_cast<int>(net_.edges.size()); }

    int node_index(const std::string& id) const;
    int edge_index(const std::string& id) const;
    bool has_node(const std::string& id) const;
    bool has_edge(const std::string& id) const;

    const Edge& edge(int index) const { return net_.edges.at(index); }
    const std::string& node(int index) const { return net_.nodes.at(index); }

    /// In-/out-edge indices in file order (the canonical input ordering for
    /// encoding functions).
    const std::vector<int>& in_edges(int node) const { return in_.at(node); }
    const std::vector<int>& out_edges(int node) const { return out_.at(node); }

    /// Nodes in topological order; every edge goes from an earlier node to
    /// a later one.
    const std::vector<int>& topo_order() const { return topo_; }
    /// Edge indices ordered by tail position in topo_order, ties in file order.
    const std::vector<int>& topo_edges() const { return topo_edges_; }

  private:
    Network net_;
    std::map<std::string, int> node_by_id_;
    std::map<std::string, int> edge_by_id_;
    std::vector<std::vector<int>> in_, out_;
    std::vector<int> topo_;
    std::vector<int> topo_edges_;
};

/// k source-terminal pairs over one network; terminal i must recover the
/// message of source i. Sources may be co-located (same node hosting several
/// logical slots); terminals must be distinct nodes.
struct MultipleUnicastInstance {
    Topology topo;
    std::vector<std::pair<std::string, std::string>> pairs;

    int pair_count() const { return static_cast<int>(pairs.size()); }
    int source_node(int pair) const { return topo.node_index(pairs.at(pair).first); }
    int terminal_node(int pair) const { return topo.node_index(pairs.at(pair).second); }
    /// Pair indices whose source sits at `node`, ascending.
    std::vector<int> source_slots_at(int node) const;
};

/// Single-source single-terminal instance with an adversary that may pick
/// any one set from adversary_class and corrupt every edge in it.
struct NECInstance {
    Topology topo;
    std::string source;
    std::string terminal;
    std::vector<std::vector<std::string>> adversary_class;

    int source_node() const { return topo.node_index(source); }
    int terminal_node() const { return topo.node_index(terminal); }
};

MultipleUnicastInstance make_mu_instance(
    Network net, std::vector<std::pair<std::string, std::string>> pairs);

NECInstance make_nec_instance(Network net, std::string source, std::string terminal,
                              std::vector<std::vector<std::string>> adversary_class);

/// Sum of capacities of edges crossing from `part` to its complement.
/// Nodes in `part` must exist.
int cut_capacity(const Topology& topo, const std::set<std::string>& part);

/// Same, but checks that the source side is in `part` and the terminal is not.
int cut_capacity(const NECInstance& inst, const std::set<std::string>& part);

/// Tightest common-rate bound obtained by exhaustive edge-cut enumeration:
/// min over edge subsets C separating at least one pair of
/// capacity(C) / (number of pairs separated). Refuses networks with more
/// than max_cut_edges edges.
Rat cutset_rate_bound(const MultipleUnicastInstance& inst, int max_cut_edges = 20);

using InstanceVariant = std::variant<MultipleUnicastInstance, NECInstance>;

nlohmann::json network_to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const MultipleUnicastInstance& inst);
nlohmann::json instance_to_json(const NECInstance& inst);
InstanceVariant instance_from_json(const nlohmann::json& j);

InstanceVariant load_instance_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace necred

#endif
