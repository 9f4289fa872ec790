#include "necred/reduction.hpp"

#include <algorithm>
#include <set>

namespace necred {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

std::string fresh_id(const std::string& base, const std::set<std::string>& used) {
    if (!used.count(base)) return base;
    for (int i = 1;; ++i) {
        std::string candidate = base + "_" + std::to_string(i);
        if (!used.count(candidate)) return candidate;
    }
}

}  // namespace

GadgetInstance build_gadget(const MultipleUnicastInstance& inner) {
    const int k = inner.pair_count();
    const Network& in_net = inner.topo.net();

    std::set<std::string> node_ids(in_net.nodes.begin(), in_net.nodes.end());
    std::set<std::string> edge_ids;
    for (const Edge& e : in_net.edges) edge_ids.insert(e.id);

    auto claim_node = [&](const std::string& base) {
        std::string id = fresh_id(base, node_ids);
        node_ids.insert(id);
        return id;
    };
    auto claim_edge = [&](const std::string& base) {
        std::string id = fresh_id(base, edge_ids);
        edge_ids.insert(id);
        return id;
    };

    GadgetInstance g;
    g.inner = inner;
    g.source = claim_node("s");
    g.terminal = claim_node("t");

    Network net = in_net;
    net.nodes.push_back(g.source);
    std::vector<std::string> relay_nodes(k), guard_nodes(k);
    for (int i = 0; i < k; ++i) {
        relay_nodes[i] = claim_node("A." + std::to_string(i + 1));
        net.nodes.push_back(relay_nodes[i]);
    }
    for (int i = 0; i < k; ++i) {
        guard_nodes[i] = claim_node("B." + std::to_string(i + 1));
        net.nodes.push_back(guard_nodes[i]);
    }
    net.nodes.push_back(g.terminal);

    for (int i = 0; i < k; ++i) {
        const std::string tag = "." + std::to_string(i + 1);
        GadgetBranch br;
        br.relay_node = relay_nodes[i];
        br.guard_node = guard_nodes[i];
        br.inner_source = inner.pairs[i].first;
        br.inner_terminal = inner.pairs[i].second;
        br.a = claim_edge("a" + tag);
        br.x = claim_edge("x" + tag);
        br.y = claim_edge("y" + tag);
        br.z = claim_edge("z" + tag);
        br.zp = claim_edge("zp" + tag);
        br.b = claim_edge("b" + tag);
        net.edges.push_back({br.a, g.source, br.relay_node, 1});
        net.edges.push_back({br.x, br.relay_node, br.guard_node, 1});
        net.edges.push_back({br.y, br.relay_node, br.guard_node, 1});
        net.edges.push_back({br.z, br.relay_node, br.inner_source, 1});
        net.edges.push_back({br.zp, br.inner_terminal, br.guard_node, 1});
        net.edges.push_back({br.b, br.guard_node, g.terminal, 1});
        g.branches.push_back(std::move(br));
    }

    std::set<std::string> protected_edges;
    for (const GadgetBranch& br : g.branches) {
        protected_edges.insert(br.a);
        protected_edges.insert(br.b);
    }
    std::vector<std::vector<std::string>> adversary;
    for (const Edge& e : net.edges)
        if (!protected_edges.count(e.id)) adversary.push_back({e.id});

    g.nec = make_nec_instance(std::move(net), g.source, g.terminal, std::move(adversary));
    check_gadget_shape(g);
    return g;
}

void check_gadget_shape(const GadgetInstance& g) {
    const Topology& topo = g.nec.topo;
    const int k = g.k();
    if (k != g.inner.pair_count()) fail("gadget branch count does not match the inner pairs");
    if (g.nec.source != g.source || g.nec.terminal != g.terminal)
        fail("gadget endpoints disagree with the embedded instance");

    // The inner network must be embedded unchanged as a prefix of the edge list.
    const Network& in_net = g.inner.topo.net();
    const Network& net = topo.net();
    if (net.edges.size() != in_net.edges.size() + 6 * static_cast<std::size_t>(k))
        fail("gadget edge count is off");
    for (std::size_t i = 0; i < in_net.edges.size(); ++i) {
        const Edge& a = net.edges[i];
        const Edge& b = in_net.edges[i];
        if (a.id != b.id || a.tail != b.tail || a.head != b.head || a.capacity != b.capacity)
            fail("inner network is not embedded unchanged at edge " + b.id);
    }

    auto expect_edge = [&](const std::string& id, const std::string& tail, const std::string& head) {
        const Edge& e = topo.edge(topo.edge_index(id));
        if (e.tail != tail || e.head != head)
            fail("gadget edge " + id + " runs " + e.tail + " -> " + e.head + ", expected " + tail +
                 " -> " + head);
        if (e.capacity != 1) fail("gadget edge " + id + " must have unit capacity");
    };

    const int source = topo.node_index(g.source);
    const int terminal = topo.node_index(g.terminal);
    if (!topo.in_edges(source).empty()) fail("gadget source must have no in-edges");
    if (!topo.out_edges(terminal).empty()) fail("gadget terminal must have no out-edges");
    if (topo.out_edges(source).size() != static_cast<std::size_t>(k))
        fail("gadget source must have exactly k out-edges");
    if (topo.in_edges(terminal).size() != static_cast<std::size_t>(k))
        fail("gadget terminal must have exactly k in-edges");

    for (int i = 0; i < k; ++i) {
        const GadgetBranch& br = g.branches[i];
        expect_edge(br.a, g.source, br.relay_node);
        expect_edge(br.x, br.relay_node, br.guard_node);
        expect_edge(br.y, br.relay_node, br.guard_node);
        expect_edge(br.z, br.relay_node, br.inner_source);
        expect_edge(br.zp, br.inner_terminal, br.guard_node);
        expect_edge(br.b, br.guard_node, g.terminal);
        if (topo.out_edges(source)[i] != topo.edge_index(br.a))
            fail("source out-edge " + std::to_string(i) + " is not " + br.a);
        if (topo.in_edges(terminal)[i] != topo.edge_index(br.b))
            fail("terminal in-edge " + std::to_string(i) + " is not " + br.b);
        const int relay = topo.node_index(br.relay_node);
        if (topo.in_edges(relay) != std::vector<int>{topo.edge_index(br.a)})
            fail("relay node of branch " + std::to_string(i + 1) + " must read only " + br.a);
        if (topo.out_edges(relay) !=
            std::vector<int>{topo.edge_index(br.x), topo.edge_index(br.y), topo.edge_index(br.z)})
            fail("relay node of branch " + std::to_string(i + 1) + " must emit x, y, z");
        const int guard = topo.node_index(br.guard_node);
        if (topo.in_edges(guard) !=
            std::vector<int>{topo.edge_index(br.x), topo.edge_index(br.y), topo.edge_index(br.zp)})
            fail("guard node of branch " + std::to_string(i + 1) + " must read x, y, zp");
        if (topo.out_edges(guard) != std::vector<int>{topo.edge_index(br.b)})
            fail("guard node of branch " + std::to_string(i + 1) + " must emit only " + br.b);
        if (br.inner_source != g.inner.pairs[i].first ||
            br.inner_terminal != g.inner.pairs[i].second)
            fail("branch " + std::to_string(i + 1) + " does not wrap inner pair " +
                 std::to_string(i + 1));
    }

    // Adversary class: every edge once, as a singleton, except a- and b-edges.
    std::set<std::string> protected_edges;
    for (const GadgetBranch& br : g.branches) {
        protected_edges.insert(br.a);
        protected_edges.insert(br.b);
    }
    std::vector<std::vector<std::string>> expected;
    for (const Edge& e : net.edges)
        if (!protected_edges.count(e.id)) expected.push_back({e.id});
    if (g.nec.adversary_class != expected)
        fail("adversary class must hold all singletons except the a- and b-edges, in edge order");
}

NetworkCode backward_embed(const GadgetInstance& g, const NetworkCode& mu_code) {
    const int k = g.k();
    const int n = mu_code.block_length;
    for (int w : mu_code.message_widths)
        if (w != n)
            fail("embedding needs a unit-rate inner code: message width " + std::to_string(w) +
                 " differs from block length " + std::to_string(n));
    // Also validates that the inner code fits the inner instance.
    EvalPlan::build(g.inner, mu_code);

    NetworkCode code;
    code.block_length = n;
    code.message_widths = {k * n};

    for (int i = 0; i < k; ++i) {
        const GadgetBranch& br = g.branches[i];
        code.encoders.emplace(br.a,
                              LocalFunction::expr(FnExpr::slice_of(i * n, (i + 1) * n - 1)));
        code.encoders.emplace(br.x, LocalFunction::expr(FnExpr::relay_of(0)));
        code.encoders.emplace(br.y, LocalFunction::expr(FnExpr::relay_of(0)));
        code.encoders.emplace(br.z, LocalFunction::expr(FnExpr::relay_of(0)));
        code.encoders.emplace(br.zp, mu_code.decoders.at(br.inner_terminal));

        // Guard rule: forward x while the duplicates agree, else trust the
        // inner decoding reported on zp. A single edge error can invalidate
        // the x/y agreement or zp, never both.
        const int widths[3] = {n, n, n};
        code.encoders.emplace(br.b, tabulate(widths, n, [](std::span<const std::uint64_t> v) {
                                  return v[0] == v[1] ? v[0] : v[2];
                              }));
    }

    // Inner edges keep their encoders. At a node hosting several co-located
    // message slots the slot layout changes from one concatenated slot to one
    // slot per injected z-edge; an expanded table is layout-compatible, so
    // expressions are expanded there.
    for (const Edge& e : g.inner.topo.net().edges) {
        const LocalFunction& fn = mu_code.encoders.at(e.id);
        const int tail = g.inner.topo.node_index(e.tail);
        const auto slots = g.inner.source_slots_at(tail);
        if (slots.size() > 1 && !fn.is_table()) {
            std::vector<int> widths;
            for (int ei : g.inner.topo.in_edges(tail))
                widths.push_back(n * g.inner.topo.edge(ei).capacity);
            widths.push_back(static_cast<int>(slots.size()) * n);
            code.encoders.emplace(e.id, expand_truth_table(fn, widths, n * e.capacity));
        } else {
            code.encoders.emplace(e.id, fn);
        }
    }

    // The terminal reassembles the message from the guarded branch outputs.
    code.decoders.emplace(g.terminal, LocalFunction::expr(FnExpr::slice_of(0, k * n - 1)));
    return code;
}

using nlohmann::json;

nlohmann::json gadget_to_json(const GadgetInstance& g) {
    json j = instance_to_json(g.nec);
    json branches = json::array();
    for (const GadgetBranch& br : g.branches)
        branches.push_back({{"a", br.a},
                            {"x", br.x},
                            {"y", br.y},
                            {"z", br.z},
                            {"zp", br.zp},
                            {"b", br.b},
                            {"relay_node", br.relay_node},
                            {"guard_node", br.guard_node},
                            {"inner_source", br.inner_source},
                            {"inner_terminal", br.inner_terminal}});
    j["roles"] = json{{"source", g.source}, {"terminal", g.terminal}, {"branches", branches}};
    j["provenance"] = instance_to_json(g.inner);
    return j;
}

GadgetInstance gadget_from_json(const nlohmann::json& j) {
    GadgetInstance g;
    try {
        InstanceVariant nec = instance_from_json(j);
        if (!std::holds_alternative<NECInstance>(nec))
            fail("gadget file must describe a nec instance");
        g.nec = std::get<NECInstance>(std::move(nec));
        InstanceVariant inner = instance_from_json(j.at("provenance"));
        if (!std::holds_alternative<MultipleUnicastInstance>(inner))
            fail("gadget provenance must be a multiple-unicast instance");
        g.inner = std::get<MultipleUnicastInstance>(std::move(inner));
        const json& roles = j.at("roles");
        g.source = roles.at("source").get<std::string>();
        g.terminal = roles.at("terminal").get<std::string>();
        for (const json& jb : roles.at("branches")) {
            GadgetBranch br;
            br.a = jb.at("a").get<std::string>();
            br.x = jb.at("x").get<std::string>();
            br.y = jb.at("y").get<std::string>();
            br.z = jb.at("z").get<std::string>();
            br.zp = jb.at("zp").get<std::string>();
            br.b = jb.at("b").get<std::string>();
            br.relay_node = jb.at("relay_node").get<std::string>();
            br.guard_node = jb.at("guard_node").get<std::string>();
            br.inner_source = jb.at("inner_source").get<std::string>();
            br.inner_terminal = jb.at("inner_terminal").get<std::string>();
            g.branches.push_back(std::move(br));
        }
    } catch (const json::exception& ex) {
        fail(std::string("bad gadget description: ") + ex.what());
    }
    check_gadget_shape(g);
    return g;
}

GadgetInstance load_gadget_file(const std::string& path) {
    return gadget_from_json(read_json_file(path));
}

}  // namespace necred
