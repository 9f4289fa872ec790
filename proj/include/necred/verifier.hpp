#ifndef NECRED_VERIFIER_HPP
#define NECRED_VERIFIER_HPP

#include "necred/code.hpp"
#include "necred/network.hpp"
#include "necred/reduction.hpp"

#include <json.hpp>

#include <optional>
#include <unordered_map>
#include <vector>

namespace necred {

struct VerifyOptions {
    std::uint64_t max_patterns = std::uint64_t{1} << 20;
    std::uint64_t max_messages = std::uint64_t{1} << 20;
    int workers = 1;
    /// Strict semantics (default): every edge of the realized set errs.
    /// Closed-down semantics additionally admit errors on any nonempty
    /// subset of the set.
    bool closed_down = false;
};

/// Number of admissible patterns under strict semantics, including the
/// error-free pattern: 1 + sum over sets A of prod over e in A of
/// (2^(n*c_e) - 1). Throws LimitError when the count exceeds `limit`.
std::uint64_t count_patterns(const NECInstance& inst, int block_length,
                             std::uint64_t limit = std::uint64_t{1} << 20);

/// Materializes the admissible patterns in deterministic order: the
/// error-free pattern first, then sets in class order; within a set, mask
/// tuples ascend with the first edge as the most significant digit.
std::vector<ErrorPattern> enumerate_patterns(const NECInstance& inst, int block_length,
                                             const VerifyOptions& opts = {});

struct BadMessage {
    std::uint64_t message = 0;
    ErrorPattern witness;  // first failing pattern in enumeration order
};

/// Exact partition of the message space into decodable and undecodable
/// messages, with one witness per undecodable message.
struct VerificationReport {
    int message_width = 0;
    std::vector<std::uint64_t> good;  // ascending
    std::vector<BadMessage> bad;      // ascending by message
    Rat epsilon;                      // |bad| / 2^message_width
    std::uint64_t pattern_count = 0;

    std::uint64_t message_count() const { return std::uint64_t{1} << message_width; }
};

/// Brute-force check of a single-source code: a message is good when the
/// terminal reproduces it under the error-free pattern and every admissible
/// error pattern.
VerificationReport verify_nec(const NECInstance& inst, const NetworkCode& code,
                              const VerifyOptions& opts = {});

/// Exhaustive check of a multiple-unicast code over all joint message
/// tuples (channels are error-free here); a tuple is satisfied when every
/// terminal outputs its paired source's piece.
struct MuReport {
    int message_width = 0;
    std::vector<std::uint64_t> failing;  // unsatisfied tuples, ascending
    Rat epsilon;
    std::uint64_t tuple_count = 0;
};
MuReport verify_mu(const MultipleUnicastInstance& inst, const NetworkCode& code,
                   const VerifyOptions& opts = {});

/// Error-free signals on the gadget cuts, per good message. Vectors pack
/// branch i's n-bit signal at bit offset i*n (branches 0-based here).
struct CutImages {
    int k = 0;
    int n = 0;
    int message_width = 0;
    std::vector<std::uint64_t> messages;  // = report.good
    std::vector<std::uint64_t> a, b, x, y, z, zp;

    std::unordered_map<std::uint64_t, int> index_by_a;  // a-vector -> index into messages
    std::unordered_map<std::uint64_t, int> index_by_b;

    std::uint64_t coord(std::uint64_t packed, int branch) const {
        return (packed >> (branch * n)) & bit_mask(n);
    }
    std::uint64_t with_coord(std::uint64_t packed, int branch, std::uint64_t value) const {
        return (packed & ~(bit_mask(n) << (branch * n))) | (value << (branch * n));
    }
    std::uint64_t vector_space() const { return std::uint64_t{1} << (k * n); }
    std::uint64_t a_err_count() const { return vector_space() - index_by_a.size(); }
    std::uint64_t b_err_count() const { return vector_space() - index_by_b.size(); }
    bool a_vector_good(std::uint64_t v) const { return index_by_a.count(v) > 0; }
    bool b_vector_good(std::uint64_t v) const { return index_by_b.count(v) > 0; }
};

/// Evaluates every good message error-free and collects the six cut-image
/// vectors. Requires unit-capacity branch edges (the gadget shape) and
/// enforces injectivity of the a- and b-images; an injectivity violation
/// means a verifier bug or a non-gadget instance and throws Error.
CutImages cut_images(const GadgetInstance& g, const NetworkCode& code,
                     const VerificationReport& report);

nlohmann::json pattern_to_json(const ErrorPattern& p);
ErrorPattern pattern_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const VerificationReport& r);
nlohmann::json report_to_json(const MuReport& r);
nlohmann::json rat_to_json(const Rat& r);

}  // namespace necred

#endif
