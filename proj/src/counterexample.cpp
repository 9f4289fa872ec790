#include "necred/counterexample.hpp"

#include <set>

namespace necred {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

}  // namespace

CxInstances build_cx_instances(int k) {
    if (k < 2) fail("the family needs k >= 2 branches");
    Network net;
    for (int i = 1; i <= k; ++i) net.nodes.push_back("s" + std::to_string(i));
    net.nodes.push_back("C");
    net.nodes.push_back("D");
    for (int i = 1; i <= k; ++i) net.nodes.push_back("t" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 1; i <= k; ++i) {
        net.edges.push_back({"sc." + std::to_string(i), "s" + std::to_string(i), "C", 1});
        pairs.emplace_back("s" + std::to_string(i), "t" + std::to_string(i));
    }
    net.edges.push_back({"cd", "C", "D", 1});
    for (int i = 1; i <= k; ++i)
        net.edges.push_back({"dt." + std::to_string(i), "D", "t" + std::to_string(i), 1});

    CxInstances cx;
    cx.inner = make_mu_instance(std::move(net), std::move(pairs));
    cx.gadget = build_gadget(cx.inner);
    return cx;
}

CxCode build_cx_code(int k, int n) {
    if (k < 2) fail("the family needs k >= 2 branches");
    if (n < 2) fail("block length " + std::to_string(n) + " leaves no payload next to the flag bit");
    const CxInstances cx = build_cx_instances(k);
    const int payload = n - 1;
    const std::uint64_t pmask = bit_mask(payload);
    const std::uint64_t flag = std::uint64_t{1} << payload;

    CxCode out;
    out.k = k;
    out.n = n;
    NetworkCode& code = out.code;
    code.block_length = n;
    code.message_widths = {k * payload};

    for (int i = 0; i < k; ++i) {
        const GadgetBranch& br = cx.gadget.branches[i];
        const std::string tag = std::to_string(i + 1);
        // Piece i rides in the low payload bits; the flag bit stays clear.
        code.encoders.emplace(
            br.a, LocalFunction::expr(FnExpr::concat_of(
                      {FnExpr::slice_of(i * payload, (i + 1) * payload - 1),
                       FnExpr::constant_of(0, 1)})));
        code.encoders.emplace(br.x, LocalFunction::expr(FnExpr::relay_of(0)));
        code.encoders.emplace(br.y, LocalFunction::expr(FnExpr::relay_of(0)));
        code.encoders.emplace(br.z, LocalFunction::expr(FnExpr::relay_of(0)));
        code.encoders.emplace("sc." + tag, LocalFunction::expr(FnExpr::relay_of(0)));
        code.encoders.emplace("dt." + tag, LocalFunction::expr(FnExpr::relay_of(0)));
        code.encoders.emplace(br.zp, LocalFunction::expr(FnExpr::relay_of(0)));

        // Guard: compare the payloads of the duplicates; fall back to the
        // parity reported on zp and raise the flag when they disagree.
        const int widths[3] = {n, n, n};
        code.encoders.emplace(br.b,
                              tabulate(widths, n, [&](std::span<const std::uint64_t> v) {
                                  if ((v[0] & pmask) == (v[1] & pmask)) return v[0] & pmask;
                                  return (v[2] & pmask) | flag;
                              }));
    }
    {
        std::vector<FnExpr> parts;
        for (int i = 0; i < k; ++i) parts.push_back(FnExpr::relay_of(i));
        code.encoders.emplace("cd", LocalFunction::expr(FnExpr::xor_of(std::move(parts))));
    }

    // Terminal: flag-0 branches give their payloads directly; one flagged
    // branch is recovered from its parity payload by xor-ing out the rest.
    // Two or more flags cannot happen under a single edge error; that input
    // region decodes to 0 and any occurrence is surfaced by the flag scan.
    std::vector<int> twidths(k, n);
    code.decoders.emplace(
        cx.gadget.terminal, tabulate(twidths, k * payload, [&](std::span<const std::uint64_t> b) {
            int flagged = -1;
            int flag_count = 0;
            for (int i = 0; i < k; ++i)
                if (b[i] & flag) {
                    flagged = i;
                    ++flag_count;
                }
            if (flag_count >= 2) return std::uint64_t{0};
            std::uint64_t message = 0;
            std::uint64_t parity = 0;
            for (int i = 0; i < k; ++i) {
                if (i == flagged) continue;
                const std::uint64_t piece = b[i] & pmask;
                message |= piece << (i * payload);
                parity ^= piece;
            }
            if (flagged >= 0)
                message |= ((b[flagged] & pmask) ^ parity) << (flagged * payload);
            return message;
        }));
    return out;
}

CxVerification verify_cx_zero_error(int k, int n, const VerifyOptions& opts) {
    const CxInstances cx = build_cx_instances(k);
    const CxCode cxc = build_cx_code(k, n);

    CxVerification result;
    result.report = verify_nec(cx.gadget.nec, cxc.code, opts);

    // Scan every evaluation for the number of flagged guard outputs.
    const EvalPlan plan = EvalPlan::build(cx.gadget.nec, cxc.code);
    const std::vector<ErrorPattern> patterns =
        enumerate_patterns(cx.gadget.nec, n, opts);
    std::vector<EvalPlan::Resolved> resolved;
    resolved.reserve(patterns.size());
    for (const ErrorPattern& p : patterns) resolved.push_back(plan.resolve(p));
    std::vector<int> b_edges;
    for (const GadgetBranch& br : cx.gadget.branches)
        b_edges.push_back(cx.gadget.nec.topo.edge_index(br.b));
    const std::uint64_t flag = std::uint64_t{1} << (n - 1);
    const std::uint64_t messages = result.report.message_count();
    for (std::uint64_t m = 0; m < messages; ++m) {
        for (const auto& r : resolved) {
            const EvalResult ev = plan.evaluate(m, r);
            int flags = 0;
            for (int ei : b_edges)
                if (ev.edge_values[ei] & flag) ++flags;
            result.max_flagged_branches = std::max(result.max_flagged_branches, flags);
            if (flags >= 2) result.failure_declared = true;
        }
    }

    if (result.report.epsilon != Rat(0))
        throw Error("family code failed exhaustive verification at k=" + std::to_string(k) +
                    ", n=" + std::to_string(n));
    if (result.failure_declared)
        throw Error("family code declared a decoding failure at k=" + std::to_string(k) +
                    ", n=" + std::to_string(n));
    return result;
}

NetworkCode n1_code(int f1, int f2, int c, int h1, int h2, int d1, int d2) {
    auto unary = [](int bits) {
        return LocalFunction::table({static_cast<std::uint64_t>(bits & 1),
                                     static_cast<std::uint64_t>(bits >> 1 & 1)});
    };
    NetworkCode code;
    code.block_length = 1;
    code.message_widths = {1, 1};
    code.encoders.emplace("sc.1", unary(f1));
    code.encoders.emplace("sc.2", unary(f2));
    std::vector<std::uint64_t> bottleneck(4);
    for (int v = 0; v < 4; ++v) bottleneck[v] = static_cast<std::uint64_t>(c >> v & 1);
    code.encoders.emplace("cd", LocalFunction::table(std::move(bottleneck)));
    code.encoders.emplace("dt.1", unary(h1));
    code.encoders.emplace("dt.2", unary(h2));
    code.decoders.emplace("t1", unary(d1));
    code.decoders.emplace("t2", unary(d2));
    return code;
}

N1Search n1_unit_rate_search() {
    // Direct enumeration, independent of the simulator: both terminals hang
    // off the single bottleneck signal, so a satisfying code would have to
    // make c(f1(m1), f2(m2)) determine m1 and m2 simultaneously.
    N1Search result;
    for (int f1 = 0; f1 < 4; ++f1)
        for (int f2 = 0; f2 < 4; ++f2)
            for (int c = 0; c < 16; ++c)
                for (int h1 = 0; h1 < 4; ++h1)
                    for (int h2 = 0; h2 < 4; ++h2)
                        for (int d1 = 0; d1 < 4; ++d1)
                            for (int d2 = 0; d2 < 4; ++d2) {
                                ++result.codes_enumerated;
                                bool ok = true;
                                for (int m = 0; m < 4 && ok; ++m) {
                                    const int m1 = m & 1, m2 = m >> 1;
                                    const int v1 = f1 >> m1 & 1;
                                    const int v2 = f2 >> m2 & 1;
                                    const int v = c >> (v1 | v2 << 1) & 1;
                                    const int o1 = d1 >> (h1 >> v & 1) & 1;
                                    const int o2 = d2 >> (h2 >> v & 1) & 1;
                                    ok = o1 == m1 && o2 == m2;
                                }
                                if (ok) ++result.satisfying;
                            }
    return result;
}

Demonstration demonstrate_unachievability(int k, const std::vector<int>& block_lengths,
                                          bool with_n1_search, const VerifyOptions& opts) {
    if (k < 2) fail("the family needs k >= 2 branches");
    Demonstration d;
    d.k = k;
    const CxInstances cx = build_cx_instances(k);
    d.cutset_bound = cutset_rate_bound(cx.inner);
    d.gadget_source_cut = cut_capacity(cx.gadget.nec, {cx.gadget.source});

    for (int n : block_lengths) {
        const CxVerification v = verify_cx_zero_error(k, n, opts);
        d.points.push_back(RatePoint{n, build_cx_code(k, n).rate(), v.report.epsilon});
    }

    if (with_n1_search) {
        if (k == 2)
            d.n1 = n1_unit_rate_search();
        else
            d.n1_notice = "length-1 search covers k=2 only; reporting the rate family";
    }
    return d;
}

using nlohmann::json;

nlohmann::json demonstration_to_json(const Demonstration& d) {
    json points = json::array();
    for (const RatePoint& p : d.points)
        points.push_back(
            {{"n", p.n}, {"rate", rat_to_json(p.rate)}, {"epsilon", rat_to_json(p.epsilon)}});
    json j{{"k", d.k},
           {"rate_points", points},
           {"cutset_bound", rat_to_json(d.cutset_bound)},
           {"gadget_source_cut", d.gadget_source_cut}};
    if (d.n1)
        j["n1_search"] = json{{"codes_enumerated", d.n1->codes_enumerated},
                              {"satisfying", d.n1->satisfying}};
    else
        j["n1_search"] = nullptr;
    if (!d.n1_notice.empty()) j["n1_notice"] = d.n1_notice;
    return j;
}

}  // namespace necred
