#include "necred/network.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

namespace necred {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

// Locates a directed cycle among the nodes left over by Kahn's algorithm and
// renders it as "u -> v -> ... -> u". Every leftover node keeps at least one
// leftover predecessor, so walking backwards must revisit a node.
std::string describe_cycle(const Network& net, const std::map<std::string, int>& node_by_id,
                           const std::vector<bool>& removed) {
    const int n = static_cast<int>(net.nodes.size());
    std::vector<std::vector<int>> pred(n);
    for (const Edge& e : net.edges) {
        int u = node_by_id.at(e.tail);
        int v = node_by_id.at(e.head);
        if (!removed[u] && !removed[v]) pred[v].push_back(u);
    }
    int start = 0;
    while (start < n && removed[start]) ++start;
    std::vector<int> path;
    std::vector<int> visited_at(n, -1);
    int cur = start;
    while (visited_at[cur] < 0) {
        visited_at[cur] = static_cast<int>(path.size());
        path.push_back(cur);
        cur = pred[cur].front();
    }
    std::ostringstream os;
    os << net.nodes[cur];
    for (int i = static_cast<int>(path.size()) - 1; i >= visited_at[cur]; --i)
        os << " -> " << net.nodes[path[i]];
    return os.str();
}

}  // namespace

Topology Topology::validate(Network net) {
    Topology t;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
        if (!t.node_by_id_.emplace(net.nodes[i], static_cast<int>(i)).second)
            fail("duplicate node id: " + net.nodes[i]);
    }
    for (std::size_t i = 0; i < net.edges.size(); ++i) {
        const Edge& e = net.edges[i];
        if (!t.edge_by_id_.emplace(e.id, static_cast<int>(i)).second)
            fail("duplicate edge id: " + e.id);
        if (!t.node_by_id_.count(e.tail))
            fail("edge " + e.id + " has dangling tail: " + e.tail);
        if (!t.node_by_id_.count(e.head))
            fail("edge " + e.id + " has dangling head: " + e.head);
        if (e.capacity < 1)
            fail("edge " + e.id + " has nonpositive capacity " + std::to_string(e.capacity));
    }

    const int n = static_cast<int>(net.nodes.size());
    t.in_.assign(n, {});
    t.out_.assign(n, {});
    std::vector<int> indegree(n, 0);
    for (std::size_t i = 0; i < net.edges.size(); ++i) {
        const Edge& e = net.edges[i];
        int u = t.node_by_id_.at(e.tail);
        int v = t.node_by_id_.at(e.head);
        if (u == v) fail("edge " + e.id + " is a self-loop, cycle: " + e.tail + " -> " + e.head);
        t.out_[u].push_back(static_cast<int>(i));
        t.in_[v].push_back(static_cast<int>(i));
        ++indegree[v];
    }

    // Kahn's algorithm; smallest node index first keeps the order stable
    // across runs.
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < n; ++v)
        if (indegree[v] == 0) ready.push(v);
    std::vector<bool> removed(n, false);
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        removed[v] = true;
        t.topo_.push_back(v);
        for (int ei : t.out_[v]) {
            int w = t.node_by_id_.at(net.edges[ei].head);
            if (--indegree[w] == 0) ready.push(w);
        }
    }
    if (static_cast<int>(t.topo_.size()) != n)
        fail("cycle detected: " + describe_cycle(net, t.node_by_id_, removed));

    std::vector<int> pos(n, 0);
    for (int i = 0; i < n; ++i) pos[t.topo_[i]] = i;
    t.topo_edges_.resize(net.edges.size());
    for (std::size_t i = 0; i < net.edges.size(); ++i) t.topo_edges_[i] = static_cast<int>(i);
    std::stable_sort(t.topo_edges_.begin(), t.topo_edges_.end(), [&](int a, int b) {
        return pos[t.node_by_id_.at(net.edges[a].tail)] < pos[t.node_by_id_.at(net.edges[b].tail)];
    });

    t.net_ = std::move(net);
    return t;
}

int Topology::node_index(const std::string& id) const {
    auto it = node_by_id_.find(id);
    if (it == node_by_id_.end()) fail("unknown node: " + id);
    return it->second;
}

int Topology::edge_index(const std::string& id) const {
    auto it = edge_by_id_.find(id);
    if (it == edge_by_id_.end()) fail("unknown edge: " + id);
    return it->second;
}

bool Topology::has_node(const std::string& id) const { return node_by_id_.count(id) > 0; }
bool Topology::has_edge(const std::string& id) const { return edge_by_id_.count(id) > 0; }

std::vector<int> MultipleUnicastInstance::source_slots_at(int node) const {
    std::vector<int> slots;
    for (int i = 0; i < pair_count(); ++i)
        if (source_node(i) == node) slots.push_back(i);
    return slots;
}

MultipleUnicastInstance make_mu_instance(
    Network net, std::vector<std::pair<std::string, std::string>> pairs) {
    MultipleUnicastInstance inst{Topology::validate(std::move(net)), std::move(pairs)};
    if (inst.pairs.empty()) fail("multiple-unicast instance needs at least one pair");
    std::set<std::string> terminals;
    for (const auto& [s, t] : inst.pairs) {
        if (!inst.topo.has_node(s)) fail("pair source not in network: " + s);
        if (!inst.topo.has_node(t)) fail("pair terminal not in network: " + t);
        if (s == t) fail("pair source and terminal coincide: " + s);
        if (!terminals.insert(t).second) fail("terminal used by two pairs: " + t);
    }
    return inst;
}

NECInstance make_nec_instance(Network net, std::string source, std::string terminal,
                              std::vector<std::vector<std::string>> adversary_class) {
    NECInstance inst{Topology::validate(std::move(net)), std::move(source), std::move(terminal),
                     std::move(adversary_class)};
    if (!inst.topo.has_node(inst.source)) fail("source not in network: " + inst.source);
    if (!inst.topo.has_node(inst.terminal)) fail("terminal not in network: " + inst.terminal);
    if (inst.source == inst.terminal) fail("source and terminal coincide");
    for (const auto& set : inst.adversary_class) {
        if (set.empty()) fail("adversary class contains an empty set");
        std::set<std::string> seen;
        for (const auto& id : set) {
            if (!inst.topo.has_edge(id)) fail("adversary set names unknown edge: " + id);
            if (!seen.insert(id).second) fail("adversary set repeats edge: " + id);
        }
    }
    return inst;
}

int cut_capacity(const Topology& topo, const std::set<std::string>& part) {
    std::vector<bool> inside(topo.node_count(), false);
    for (const auto& id : part) inside[topo.node_index(id)] = true;
    int total = 0;
    for (const Edge& e : topo.net().edges)
        if (inside[topo.node_index(e.tail)] && !inside[topo.node_index(e.head)])
            total += e.capacity;
    return total;
}

int cut_capacity(const NECInstance& inst, const std::set<std::string>& part) {
    if (!part.count(inst.source)) fail("cut part must contain the source " + inst.source);
    if (part.count(inst.terminal)) fail("cut part must exclude the terminal " + inst.terminal);
    return cut_capacity(inst.topo, part);
}

Rat cutset_rate_bound(const MultipleUnicastInstance& inst, int max_cut_edges) {
    const int m = inst.topo.edge_count();
    if (m > max_cut_edges)
        throw LimitError("cut enumeration limit: network has " + std::to_string(m) +
                         " edges, limit is " + std::to_string(max_cut_edges));
    const int n = inst.topo.node_count();
    const int k = inst.pair_count();

    // Adjacency as edge indices for quick reachability with a subset removed.
    std::vector<std::vector<int>> out(n);
    for (int ei = 0; ei < m; ++ei)
        out[inst.topo.node_index(inst.topo.edge(ei).tail)].push_back(ei);

    std::vector<int> src(k), dst(k);
    for (int i = 0; i < k; ++i) {
        src[i] = inst.source_node(i);
        dst[i] = inst.terminal_node(i);
    }

    bool found = false;
    Rat best;
    std::vector<int> stack;
    std::vector<bool> seen(n);
    for (std::uint64_t cut = 1; cut < (std::uint64_t{1} << m); ++cut) {
        int capacity = 0;
        for (int ei = 0; ei < m; ++ei)
            if (cut >> ei & 1) capacity += inst.topo.edge(ei).capacity;
        int separated = 0;
        for (int i = 0; i < k; ++i) {
            std::fill(seen.begin(), seen.end(), false);
            stack.assign(1, src[i]);
            seen[src[i]] = true;
            bool reached = false;
            while (!stack.empty() && !reached) {
                int v = stack.back();
                stack.pop_back();
                for (int ei : out[v]) {
                    if (cut >> ei & 1) continue;
                    int w = inst.topo.node_index(inst.topo.edge(ei).head);
                    if (w == dst[i]) {
                        reached = true;
                        break;
                    }
                    if (!seen[w]) {
                        seen[w] = true;
                        stack.push_back(w);
                    }
                }
            }
            if (!reached) ++separated;
        }
        if (separated == 0) continue;
        Rat candidate(capacity, separated);
        if (!found || candidate < best) {
            best = candidate;
            found = true;
        }
    }
    if (!found) fail("no edge cut separates any pair");
    return best;
}

using nlohmann::json;

nlohmann::json network_to_json(const Network& net) {
    json edges = json::array();
    for (const Edge& e : net.edges)
        edges.push_back({{"id", e.id}, {"tail", e.tail}, {"head", e.head}, {"capacity", e.capacity}});
    return json{{"nodes", net.nodes}, {"edges", edges}};
}

Network network_from_json(const nlohmann::json& j) {
    Network net;
    try {
        net.nodes = j.at("nodes").get<std::vector<std::string>>();
        for (const auto& je : j.at("edges")) {
            Edge e;
            e.id = je.at("id").get<std::string>();
            e.tail = je.at("tail").get<std::string>();
            e.head = je.at("head").get<std::string>();
            e.capacity = je.at("capacity").get<int>();
            net.edges.push_back(std::move(e));
        }
    } catch (const json::exception& ex) {
        fail(std::string("bad network description: ") + ex.what());
    }
    return net;
}

nlohmann::json instance_to_json(const MultipleUnicastInstance& inst) {
    json j = network_to_json(inst.topo.net());
    j["kind"] = "multiple_unicast";
    json pairs = json::array();
    for (const auto& [s, t] : inst.pairs) pairs.push_back(json::array({s, t}));
    j["pairs"] = pairs;
    return j;
}

nlohmann::json instance_to_json(const NECInstance& inst) {
    json j = network_to_json(inst.topo.net());
    j["kind"] = "nec";
    j["source"] = inst.source;
    j["terminal"] = inst.terminal;
    j["adversary_class"] = inst.adversary_class;
    return j;
}

InstanceVariant instance_from_json(const nlohmann::json& j) {
    std::string kind;
    try {
        kind = j.at("kind").get<std::string>();
    } catch (const json::exception& ex) {
        fail(std::string("instance file lacks a kind: ") + ex.what());
    }
    Network net = network_from_json(j);
    try {
        if (kind == "multiple_unicast") {
            std::vector<std::pair<std::string, std::string>> pairs;
            for (const auto& jp : j.at("pairs"))
                pairs.emplace_back(jp.at(0).get<std::string>(), jp.at(1).get<std::string>());
            return make_mu_instance(std::move(net), std::move(pairs));
        }
        if (kind == "nec") {
            return make_nec_instance(std::move(net), j.at("source").get<std::string>(),
                                     j.at("terminal").get<std::string>(),
                                     j.at("adversary_class").get<std::vector<std::vector<std::string>>>());
        }
    } catch (const json::exception& ex) {
        fail(std::string("bad instance description: ") + ex.what());
    }
    fail("unknown instance kind: " + kind);
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& ex) {
        fail(path + ": " + ex.what());
    }
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) fail("cannot write " + path);
    out << j.dump(2) << '\n';
}

InstanceVariant load_instance_file(const std::string& path) {
    return instance_from_json(read_json_file(path));
}

}  // namespace necred
