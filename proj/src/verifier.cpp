#include "necred/verifier.hpp"

#include <algorithm>
#include <atomic>

namespace necred {

namespace {

[[noreturn]] void limit_exceeded(const std::string& what, std::uint64_t have, std::uint64_t limit) {
    throw LimitError(what + ": " + std::to_string(have) + " exceeds the limit of " +
                     std::to_string(limit));
}

}  // namespace

std::uint64_t count_patterns(const NECInstance& inst, int block_length, std::uint64_t limit) {
    unsigned __int128 total = 1;  // the error-free pattern
    for (const auto& set : inst.adversary_class) {
        unsigned __int128 per_set = 1;
        for (const auto& id : set) {
            const int w = block_length * inst.topo.edge(inst.topo.edge_index(id)).capacity;
            per_set *= bit_mask(w);  // 2^w - 1 nonzero masks
            if (per_set > limit)
                throw LimitError("pattern enumeration: count exceeds the limit of " +
                                 std::to_string(limit));
        }
        total += per_set;
        if (total > limit)
            limit_exceeded("pattern enumeration", static_cast<std::uint64_t>(total), limit);
    }
    return static_cast<std::uint64_t>(total);
}

std::vector<ErrorPattern> enumerate_patterns(const NECInstance& inst, int block_length,
                                             const VerifyOptions& opts) {
    std::vector<ErrorPattern> out;
    out.push_back(ErrorPattern{});  // no error
    auto push_assignments = [&](int set_index, const std::vector<std::string>& edges) {
        // Odometer over nonzero masks, first edge most significant.
        std::vector<std::uint64_t> widths;
        for (const auto& id : edges)
            widths.push_back(block_length * inst.topo.edge(inst.topo.edge_index(id)).capacity);
        std::vector<std::uint64_t> mask(edges.size(), 1);
        while (true) {
            ErrorPattern p;
            p.realized_set = set_index;
            for (std::size_t j = 0; j < edges.size(); ++j) p.masks.emplace_back(edges[j], mask[j]);
            out.push_back(std::move(p));
            if (out.size() > opts.max_patterns)
                limit_exceeded("pattern enumeration", out.size(), opts.max_patterns);
            int j = static_cast<int>(edges.size()) - 1;
            while (j >= 0 && mask[j] == bit_mask(static_cast<int>(widths[j]))) {
                mask[j] = 1;
                --j;
            }
            if (j < 0) break;
            ++mask[j];
        }
    };
    for (std::size_t s = 0; s < inst.adversary_class.size(); ++s) {
        const auto& set = inst.adversary_class[s];
        if (!opts.closed_down) {
            push_assignments(static_cast<int>(s), set);
            continue;
        }
        // Closed-down semantics: every nonempty subset of the set errs.
        for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << set.size()); ++sub) {
            std::vector<std::string> chosen;
            for (std::size_t j = 0; j < set.size(); ++j)
                if (sub >> j & 1) chosen.push_back(set[j]);
            push_assignments(static_cast<int>(s), chosen);
        }
    }
    return out;
}

VerificationReport verify_nec(const NECInstance& inst, const NetworkCode& code,
                              const VerifyOptions& opts) {
    const EvalPlan plan = EvalPlan::build(inst, code);
    const int width = plan.message_width();
    const std::uint64_t messages = std::uint64_t{1} << width;
    if (messages > opts.max_messages)
        limit_exceeded("message enumeration", messages, opts.max_messages);
    if (!opts.closed_down) count_patterns(inst, code.block_length, opts.max_patterns);

    const std::vector<ErrorPattern> patterns = enumerate_patterns(inst, code.block_length, opts);
    std::vector<EvalPlan::Resolved> resolved;
    resolved.reserve(patterns.size());
    for (const ErrorPattern& p : patterns) resolved.push_back(plan.resolve(p));

    std::vector<int> first_failure(messages);
    parallel_for(messages, opts.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            int failure = -1;
            for (std::size_t p = 0; p < resolved.size(); ++p) {
                if (plan.evaluate(m, resolved[p]).decoded[0] != m) {
                    failure = static_cast<int>(p);
                    break;
                }
            }
            first_failure[m] = failure;
        }
    });

    VerificationReport report;
    report.message_width = width;
    report.pattern_count = patterns.size();
    for (std::uint64_t m = 0; m < messages; ++m) {
        if (first_failure[m] < 0)
            report.good.push_back(m);
        else
            report.bad.push_back(BadMessage{m, patterns[first_failure[m]]});
    }
    report.epsilon = Rat(static_cast<std::int64_t>(report.bad.size()),
                         static_cast<std::int64_t>(messages));
    return report;
}

MuReport verify_mu(const MultipleUnicastInstance& inst, const NetworkCode& code,
                   const VerifyOptions& opts) {
    const EvalPlan plan = EvalPlan::build(inst, code);
    const int width = plan.message_width();
    const std::uint64_t tuples = std::uint64_t{1} << width;
    if (tuples > opts.max_messages) limit_exceeded("message enumeration", tuples, opts.max_messages);

    std::vector<char> satisfied(tuples);
    parallel_for(tuples, opts.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            const EvalResult ev = plan.evaluate(m);
            bool ok = true;
            for (int t = 0; t < plan.terminal_count() && ok; ++t) {
                const auto piece = plan.expected_piece(t);
                ok = ev.decoded[t] == ((m >> piece.lo) & bit_mask(piece.width));
            }
            satisfied[m] = ok;
        }
    });

    MuReport report;
    report.message_width = width;
    report.tuple_count = tuples;
    for (std::uint64_t m = 0; m < tuples; ++m)
        if (!satisfied[m]) report.failing.push_back(m);
    report.epsilon = Rat(static_cast<std::int64_t>(report.failing.size()),
                         static_cast<std::int64_t>(tuples));
    return report;
}

CutImages cut_images(const GadgetInstance& g, const NetworkCode& code,
                     const VerificationReport& report) {
    check_gadget_shape(g);
    const EvalPlan plan = EvalPlan::build(g.nec, code);
    CutImages images;
    images.k = g.k();
    images.n = code.block_length;
    images.message_width = report.message_width;

    std::vector<int> ea(images.k), eb(images.k), ex(images.k), ey(images.k), ez(images.k),
        ezp(images.k);
    for (int i = 0; i < images.k; ++i) {
        const GadgetBranch& br = g.branches[i];
        ea[i] = g.nec.topo.edge_index(br.a);
        eb[i] = g.nec.topo.edge_index(br.b);
        ex[i] = g.nec.topo.edge_index(br.x);
        ey[i] = g.nec.topo.edge_index(br.y);
        ez[i] = g.nec.topo.edge_index(br.z);
        ezp[i] = g.nec.topo.edge_index(br.zp);
    }

    images.messages = report.good;
    auto pack = [&](const EvalResult& ev, const std::vector<int>& edges) {
        std::uint64_t packed = 0;
        for (int i = 0; i < images.k; ++i)
            packed |= ev.edge_values[edges[i]] << (i * images.n);
        return packed;
    };
    for (std::size_t idx = 0; idx < images.messages.size(); ++idx) {
        const EvalResult ev = plan.evaluate(images.messages[idx]);
        images.a.push_back(pack(ev, ea));
        images.b.push_back(pack(ev, eb));
        images.x.push_back(pack(ev, ex));
        images.y.push_back(pack(ev, ey));
        images.z.push_back(pack(ev, ez));
        images.zp.push_back(pack(ev, ezp));
        if (!images.index_by_a.emplace(images.a.back(), static_cast<int>(idx)).second)
            throw Error("a-image is not injective on the good messages; verifier bug or "
                        "non-gadget instance");
        if (!images.index_by_b.emplace(images.b.back(), static_cast<int>(idx)).second)
            throw Error("b-image is not injective on the good messages; verifier bug or "
                        "non-gadget instance");
    }
    return images;
}

using nlohmann::json;

nlohmann::json rat_to_json(const Rat& r) {
    return json{{"num", r.numerator()}, {"den", r.denominator()}};
}

nlohmann::json pattern_to_json(const ErrorPattern& p) {
    json masks = json::array();
    for (const auto& [id, mask] : p.masks) masks.push_back({{"edge", id}, {"mask", mask}});
    return json{{"realized_set", p.realized_set}, {"masks", masks}};
}

ErrorPattern pattern_from_json(const nlohmann::json& j) {
    ErrorPattern p;
    try {
        p.realized_set = j.at("realized_set").get<int>();
        for (const auto& jm : j.at("masks"))
            p.masks.emplace_back(jm.at("edge").get<std::string>(),
                                 jm.at("mask").get<std::uint64_t>());
    } catch (const json::exception& ex) {
        throw ValidationError(std::string("bad error pattern: ") + ex.what());
    }
    return p;
}

nlohmann::json report_to_json(const VerificationReport& r) {
    json bad = json::array();
    for (const BadMessage& b : r.bad)
        bad.push_back({{"message", b.message}, {"witness_pattern", pattern_to_json(b.witness)}});
    return json{{"kind", "nec"},
                {"epsilon", rat_to_json(r.epsilon)},
                {"good_count", r.good.size()},
                {"bad", bad},
                {"pattern_count", r.pattern_count},
                {"message_width", r.message_width}};
}

nlohmann::json report_to_json(const MuReport& r) {
    return json{{"kind", "multiple_unicast"},
                {"epsilon", rat_to_json(r.epsilon)},
                {"failing", r.failing},
                {"tuple_count", r.tuple_count},
                {"message_width", r.message_width}};
}

}  // namespace necred
