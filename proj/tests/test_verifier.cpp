#include "necred/counterexample.hpp"
#include "necred/verifier.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace necred;

TEST_CASE("pattern count matches the stream on the bottleneck gadget") {
    const CxInstances cx = build_cx_instances(2);
    // 5 inner edges plus 8 branch edges are strikeable; a- and b-edges are not.
    CHECK(cx.gadget.nec.adversary_class.size() == 13);
    for (int n = 1; n <= 3; ++n) {
        const std::uint64_t expected = 1 + 13 * (bit_mask(n));
        CHECK(count_patterns(cx.gadget.nec, n) == expected);
        CHECK(enumerate_patterns(cx.gadget.nec, n).size() == expected);
    }
    CHECK(count_patterns(cx.gadget.nec, 2) == 40);
}

TEST_CASE("pattern enumeration is deterministic and ascending") {
    const CxInstances cx = build_cx_instances(2);
    const auto patterns = enumerate_patterns(cx.gadget.nec, 2);
    CHECK(patterns.front().masks.empty());
    CHECK(patterns.front().realized_set == -1);
    // Per singleton set: masks 1, 2, 3 in ascending order.
    CHECK(patterns[1].realized_set == 0);
    CHECK(patterns[1].masks == decltype(patterns[1].masks){{"sc.1", 1}});
    CHECK(patterns[2].masks == decltype(patterns[2].masks){{"sc.1", 2}});
    CHECK(patterns[3].masks == decltype(patterns[3].masks){{"sc.1", 3}});
    CHECK(patterns[4].realized_set == 1);
}

TEST_CASE("a two-edge adversary set forces both masks at n=1") {
    Network net{{"a", "b", "c"}, {{"e1", "a", "b", 1}, {"e2", "b", "c", 1}}};
    NECInstance inst = make_nec_instance(net, "a", "c", {{"e1", "e2"}});
    CHECK(count_patterns(inst, 1) == 2);
    const auto patterns = enumerate_patterns(inst, 1);
    REQUIRE(patterns.size() == 2);
    CHECK(patterns[1].masks == decltype(patterns[1].masks){{"e1", 1}, {"e2", 1}});

    // Closed-down semantics also admit the single-edge strikes.
    VerifyOptions opts;
    opts.closed_down = true;
    CHECK(enumerate_patterns(inst, 1, opts).size() == 4);
}

TEST_CASE("pattern enumeration respects the limit") {
    const CxInstances cx = build_cx_instances(2);
    CHECK_THROWS_AS(count_patterns(cx.gadget.nec, 2, 10), LimitError);
    VerifyOptions opts;
    opts.max_patterns = 10;
    CHECK_THROWS_AS(verify_nec(cx.gadget.nec, build_cx_code(2, 2).code, opts), LimitError);
}

TEST_CASE("family code verifies with zero error at k=2, n=2") {
    const CxInstances cx = build_cx_instances(2);
    const VerificationReport report = verify_nec(cx.gadget.nec, build_cx_code(2, 2).code);
    CHECK(report.epsilon == Rat(0));
    CHECK(report.good.size() == 4);
    CHECK(report.bad.empty());
    CHECK(report.pattern_count == 40);
}

TEST_CASE("constant decoder leaves exactly the all-zero message good") {
    const auto fixture = testing::make_trial_fixture(2, 1);
    NetworkCode code = fixture.base;
    const std::vector<std::uint64_t> zeros(4, 0);  // b.1, b.2 carry one bit each
    code.decoders.at(fixture.gadget.terminal) = LocalFunction::table(zeros);
    const VerificationReport report = verify_nec(fixture.gadget.nec, code);
    CHECK(report.good == std::vector<std::uint64_t>{0});
    CHECK(report.epsilon == Rat(3, 4));
}

TEST_CASE("an inverted guard rule is caught by brute force") {
    const CxInstances cx = build_cx_instances(2);
    CxCode cxc = build_cx_code(2, 2);
    // Swap the guard's two arms on branch 1.
    const std::uint64_t pmask = 1, flag = 2;
    const int widths[3] = {2, 2, 2};
    cxc.code.encoders.at("b.1") = tabulate(widths, 2, [&](std::span<const std::uint64_t> v) {
        if ((v[0] & pmask) == (v[1] & pmask)) return (v[2] & pmask) | flag;
        return v[0] & pmask;
    });
    const VerificationReport report = verify_nec(cx.gadget.nec, cxc.code);
    CHECK(report.epsilon > Rat(0));
    // Each recorded witness indeed misdecodes when replayed.
    const EvalPlan plan = EvalPlan::build(cx.gadget.nec, cxc.code);
    for (const BadMessage& bad : report.bad)
        CHECK(plan.evaluate(bad.message, bad.witness).decoded[0] != bad.message);
}

TEST_CASE("verify_mu: relay code on disjoint paths is exact") {
    const auto inst = testing::disjoint_paths_instance(3);
    const MuReport report = verify_mu(inst, testing::relay_mu_code(inst, 2));
    CHECK(report.epsilon == Rat(0));
    CHECK(report.tuple_count == 64);
}

TEST_CASE("verify_mu: forwarding one source through the bottleneck fails half the tuples") {
    const CxInstances cx = build_cx_instances(2);
    NetworkCode code;
    code.block_length = 1;
    code.message_widths = {1, 1};
    code.encoders.emplace("sc.1", LocalFunction::expr(FnExpr::relay_of(0)));
    code.encoders.emplace("sc.2", LocalFunction::expr(FnExpr::relay_of(0)));
    // Only the first source's bit crosses the bottleneck; both terminals echo it.
    code.encoders.emplace("cd", LocalFunction::expr(FnExpr::relay_of(0)));
    code.encoders.emplace("dt.1", LocalFunction::expr(FnExpr::relay_of(0)));
    code.encoders.emplace("dt.2", LocalFunction::expr(FnExpr::relay_of(0)));
    code.decoders.emplace("t1", LocalFunction::expr(FnExpr::relay_of(0)));
    code.decoders.emplace("t2", LocalFunction::expr(FnExpr::relay_of(0)));
    const MuReport report = verify_mu(cx.inner, code);
    CHECK(report.epsilon == Rat(1, 2));
    CHECK(report.failing == std::vector<std::uint64_t>{1, 2});  // the tuples with m2 != m1
}

TEST_CASE("verification is deterministic across worker counts") {
    const CxInstances cx = build_cx_instances(2);
    const CxCode cxc = build_cx_code(2, 3);
    VerifyOptions serial, parallel;
    parallel.workers = 4;
    const auto r1 = verify_nec(cx.gadget.nec, cxc.code, serial);
    const auto r2 = verify_nec(cx.gadget.nec, cxc.code, parallel);
    CHECK(report_to_json(r1) == report_to_json(r2));
}

TEST_CASE("cut images of the family code at k=2, n=2") {
    const CxInstances cx = build_cx_instances(2);
    const CxCode cxc = build_cx_code(2, 2);
    const VerificationReport report = verify_nec(cx.gadget.nec, cxc.code);
    const CutImages images = cut_images(cx.gadget, cxc.code, report);

    CHECK(images.messages.size() == 4);
    for (std::size_t idx = 0; idx < images.messages.size(); ++idx) {
        const std::uint64_t m = images.messages[idx];
        const std::uint64_t m1 = m & 1, m2 = m >> 1 & 1;
        // Payload pieces ride the low bit of each 2-bit coordinate; flags stay 0.
        CHECK(images.coord(images.a[idx], 0) == m1);
        CHECK(images.coord(images.a[idx], 1) == m2);
        CHECK(images.b[idx] == images.a[idx]);
        CHECK(images.coord(images.zp[idx], 0) == (m1 ^ m2));
    }
    // Four good vectors inside a 16-element space.
    CHECK(images.b_err_count() == 12);
    CHECK(images.a_err_count() == 12);
}

TEST_CASE("cut images of the embedded relay code have no error vectors") {
    const auto fixture = testing::make_trial_fixture(2, 1);
    const VerificationReport report = verify_nec(fixture.gadget.nec, fixture.base);
    CHECK(report.epsilon == Rat(0));
    const CutImages images = cut_images(fixture.gadget, fixture.base, report);
    CHECK(images.a_err_count() == 0);
    CHECK(images.b_err_count() == 0);
    for (std::size_t idx = 0; idx < images.messages.size(); ++idx) {
        CHECK(images.a[idx] == images.messages[idx]);
        CHECK(images.b[idx] == images.messages[idx]);
        CHECK(images.z[idx] == images.messages[idx]);
        CHECK(images.zp[idx] == images.messages[idx]);
    }
}

TEST_CASE("report files carry the exact rational and the witnesses") {
    const auto fixture = testing::make_trial_fixture(2, 1);
    NetworkCode code = fixture.base;
    const std::vector<std::uint64_t> zeros(4, 0);
    code.decoders.at(fixture.gadget.terminal) = LocalFunction::table(zeros);
    const VerificationReport report = verify_nec(fixture.gadget.nec, code);
    const nlohmann::json j = report_to_json(report);
    CHECK(j.at("epsilon") == nlohmann::json{{"num", 3}, {"den", 4}});
    CHECK(j.at("good_count") == 1);
    CHECK(j.at("bad").size() == 3);
    const ErrorPattern witness = pattern_from_json(j.at("bad").at(0).at("witness_pattern"));
    CHECK(witness.masks.empty());  // misdecodes already without any error
}
