#ifndef NECRED_COUNTEREXAMPLE_HPP
#define NECRED_COUNTEREXAMPLE_HPP

#include "necred/reduction.hpp"
#include "necred/verifier.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace necred {

/// The paired instances of the rate-gap family: an inner network where k
/// unit-rate flows share one bottleneck edge, and its reduction gadget.
/// Inner nodes: s1..sk, C, D, t1..tk; edges sc.i, cd, dt.i, all unit
/// capacity; pair i is (si, ti).
struct CxInstances {
    MultipleUnicastInstance inner;
    GadgetInstance gadget;
};
CxInstances build_cx_instances(int k);

/// Rate-(k - k/n) gadget code: every signal reserves its top bit as a flag
/// and carries an (n-1)-bit payload below it. The source splits the message
/// into k payload pieces; a/x/y/z and the inner path to t_i carry piece i,
/// the bottleneck carries the xor of all pieces, and guard i forwards x's
/// payload with flag 0 when x and y agree on payload, else the zp payload
/// with flag 1. The terminal takes flag-0 payloads directly and recovers at
/// most one flagged piece by xor-ing the others out of its parity.
struct CxCode {
    int k = 0;
    int n = 0;
    NetworkCode code;

    Rat rate() const { return Rat(static_cast<std::int64_t>(k) * (n - 1), n); }
};
CxCode build_cx_code(int k, int n);

/// Runs the exhaustive check on the family code and asserts its contract:
/// zero error, never more than one flagged branch, decoding failure never
/// declared. Throws Error if the contract is violated.
struct CxVerification {
    VerificationReport report;
    int max_flagged_branches = 0;
    bool failure_declared = false;
};
CxVerification verify_cx_zero_error(int k, int n, const VerifyOptions& opts = {});

/// Exhaustive search over every length-1 unit-rate code on the k=2 inner
/// network: all 1-bit edge functions and decoders. No code decodes both
/// pairs for all four message tuples.
struct N1Search {
    std::uint64_t codes_enumerated = 0;
    std::uint64_t satisfying = 0;
};
N1Search n1_unit_rate_search();

/// One candidate of that search as a regular network code, for
/// cross-checking the search against the simulator. Unary functions are
/// 2-bit tables (bit m holds f(m)), the bottleneck function a 4-bit table.
NetworkCode n1_code(int f1, int f2, int c, int h1, int h2, int d1, int d2);

struct RatePoint {
    int n = 0;
    Rat rate;
    Rat epsilon;
};

/// The demonstration that the gadget's cut-set rate k is approached by the
/// zero-error family but, for k=2, cannot be reached: the inner instance
/// caps the common rate at 1/k and no length-1 unit-rate inner code exists.
struct Demonstration {
    int k = 0;
    std::vector<RatePoint> points;       // verified zero-error rates, ascending n
    Rat cutset_bound;                    // inner common-rate bound, 1/k
    int gadget_source_cut = 0;           // capacity of the a-cut, k
    std::optional<N1Search> n1;          // k = 2 only
    std::string n1_notice;               // set when the search is skipped
};
Demonstration demonstrate_unachievability(int k, const std::vector<int>& block_lengths = {2, 3, 4},
                                          bool with_n1_search = true,
                                          const VerifyOptions& opts = {});

nlohmann::json demonstration_to_json(const Demonstration& d);

}  // namespace necred

#endif
