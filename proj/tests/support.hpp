#ifndef NECRED_TESTS_SUPPORT_HPP
#define NECRED_TESTS_SUPPORT_HPP

#include "necred/counterexample.hpp"
#include "necred/reduction.hpp"
#include "necred/transfer.hpp"
#include "necred/verifier.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace necred::testing {

/// k disjoint unit-capacity relay paths u_i -> v_i, pair i = (u_i, v_i).
inline MultipleUnicastInstance disjoint_paths_instance(int k) {
    Network net;
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 1; i <= k; ++i) {
        net.nodes.push_back("u" + std::to_string(i));
        net.nodes.push_back("v" + std::to_string(i));
    }
    for (int i = 1; i <= k; ++i) {
        net.edges.push_back({"p." + std::to_string(i), "u" + std::to_string(i),
                             "v" + std::to_string(i), 1});
        pairs.emplace_back("u" + std::to_string(i), "v" + std::to_string(i));
    }
    return make_mu_instance(std::move(net), std::move(pairs));
}

/// Unit-rate relay code on the disjoint paths.
inline NetworkCode relay_mu_code(const MultipleUnicastInstance& inst, int n) {
    NetworkCode code;
    code.block_length = n;
    code.message_widths.assign(inst.pair_count(), n);
    for (const Edge& e : inst.topo.net().edges)
        code.encoders.emplace(e.id, LocalFunction::expr(FnExpr::relay_of(0)));
    for (const auto& [s, t] : inst.pairs) {
        (void)s;
        code.decoders.emplace(t, LocalFunction::expr(FnExpr::relay_of(0)));
    }
    return code;
}

/// The rate-k zero-error base code used by the corruption trials: the
/// backward embedding of the relay code on the disjoint-paths gadget.
struct TrialFixture {
    MultipleUnicastInstance inner;
    GadgetInstance gadget;
    NetworkCode base;
};

inline TrialFixture make_trial_fixture(int k, int n) {
    TrialFixture f{disjoint_paths_instance(k), {}, {}};
    f.gadget = build_gadget(f.inner);
    f.base = backward_embed(f.gadget, relay_mu_code(f.inner, n));
    return f;
}

/// Extends the rate-(k - k/n) family code to rate k so that the transfer
/// machinery applies: the message grows to kn bits, the encoders keep
/// reading the k(n-1) payload bits, and the decoder reproduces the payload
/// with the extra bits pinned to zero. Exactly the payload-only messages
/// survive, so the measured error is 1 - 2^-k and the good set keeps the
/// family's parity structure (zp-classes genuinely mix b-signals).
inline NetworkCode rate_k_lift(const CxCode& cx) {
    NetworkCode code = cx.code;
    code.message_widths = {cx.k * cx.n};
    const int payload_width = cx.k * (cx.n - 1);
    const CxInstances insts = build_cx_instances(cx.k);
    const std::string& terminal = insts.gadget.terminal;
    std::vector<int> widths(cx.k, cx.n);
    const LocalFunction& original = cx.code.decoders.at(terminal);
    code.decoders.at(terminal) = tabulate(widths, cx.k * cx.n, [&](std::span<const std::uint64_t> b) {
        return eval_function(original, b, widths, payload_width);
    });
    return code;
}

/// A rate-k code on the k=2 bottleneck gadget, n=3, whose good b-signals
/// echo the payload parity in a bit the terminal never reads. Signals use
/// bit 0 for the branch's one-bit piece, bit 1 for the parity echo and bit 2
/// as the guard flag. Because the echo rides zp, a-classes genuinely hold
/// two b-values (the lemma-4 shape: |M(a)| = 2 and L = 2 per class), which
/// neither the family code nor the embedded relay codes can produce.
inline NetworkCode parity_echo_code() {
    const int n = 3;
    const CxInstances insts = build_cx_instances(2);
    NetworkCode code;
    code.block_length = n;
    code.message_widths = {2 * n};

    for (int i = 0; i < 2; ++i) {
        const GadgetBranch& br = insts.gadget.branches[i];
        const std::string tag = std::to_string(i + 1);
        code.encoders.emplace(br.a, LocalFunction::expr(FnExpr::concat_of(
                                        {FnExpr::slice_of(i * n, i * n),
                                         FnExpr::constant_of(0, 2)})));
        code.encoders.emplace(br.x, LocalFunction::expr(FnExpr::relay_of(0)));
        code.encoders.emplace(br.y, LocalFunction::expr(FnExpr::relay_of(0)));
        code.encoders.emplace(br.z, LocalFunction::expr(FnExpr::relay_of(0)));
        code.encoders.emplace("sc." + tag, LocalFunction::expr(FnExpr::relay_of(0)));
        code.encoders.emplace("dt." + tag, LocalFunction::expr(FnExpr::relay_of(0)));
        code.encoders.emplace(br.zp, LocalFunction::expr(FnExpr::relay_of(0)));

        const int widths[3] = {n, n, n};
        code.encoders.emplace(br.b, tabulate(widths, n, [](std::span<const std::uint64_t> v) {
                                  if ((v[0] & 3) == (v[1] & 3))
                                      return (v[0] & 1) | ((v[2] & 1) << 1);
                                  return ((v[2] & 1) << 1) | std::uint64_t{4};
                              }));
    }
    code.encoders.emplace("cd", LocalFunction::expr(FnExpr::xor_of(
                                    {FnExpr::relay_of(0), FnExpr::relay_of(1)})));

    const std::vector<int> twidths(2, n);
    code.decoders.emplace(
        insts.gadget.terminal, tabulate(twidths, 2 * n, [&](std::span<const std::uint64_t> b) {
            const bool f1 = b[0] & 4, f2 = b[1] & 4;
            if (f1 && f2) return std::uint64_t{0};
            std::uint64_t p1, p2;
            if (f1) {
                p2 = b[1] & 1;
                p1 = ((b[0] >> 1) & 1) ^ p2;
            } else if (f2) {
                p1 = b[0] & 1;
                p2 = ((b[1] >> 1) & 1) ^ p1;
            } else {
                p1 = b[0] & 1;
                p2 = b[1] & 1;
            }
            return p1 | (p2 << n);
        }));
    return code;
}

/// Edges the adversary may strike (the flattened adversary class).
inline std::vector<std::string> adversary_scope(const GadgetInstance& g) {
    std::vector<std::string> scope;
    std::set<std::string> seen;
    for (const auto& set : g.nec.adversary_class)
        for (const std::string& id : set)
            if (seen.insert(id).second) scope.push_back(id);
    return scope;
}

/// Randomizes one truth-table entry on each of 1..3 distinct edges within
/// the adversary's scope.
inline NetworkCode perturb_code(const GadgetInstance& g, const NetworkCode& base,
                                std::mt19937_64& rng) {
    const Topology& topo = g.nec.topo;
    const int n = base.block_length;
    std::vector<std::string> scope = adversary_scope(g);
    std::shuffle(scope.begin(), scope.end(), rng);
    NetworkCode out = base;
    const int edges = 1 + static_cast<int>(rng() % 3);
    for (int round = 0; round < edges; ++round) {
        const std::string& id = scope[round];
        const int ei = topo.edge_index(id);
        const int tail = topo.node_index(topo.edge(ei).tail);
        std::vector<int> widths;
        for (int in_edge : topo.in_edges(tail))
            widths.push_back(n * topo.edge(in_edge).capacity);
        const int out_width = n * topo.edge(ei).capacity;
        LocalFunction expanded = expand_truth_table(out.encoders.at(id), widths, out_width);
        auto& entries = std::get<TruthTable>(expanded.body).entries;
        entries[rng() % entries.size()] = rng() & bit_mask(out_width);
        out.encoders.at(id) = std::move(expanded);
    }
    return out;
}

/// Packs multiple-unicast pieces into one message word (piece 0 lowest).
inline std::uint64_t pack_pieces(const std::vector<std::uint64_t>& pieces, int width_each) {
    std::uint64_t packed = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) packed |= pieces[i] << (i * width_each);
    return packed;
}

}  // namespace necred::testing

#endif
