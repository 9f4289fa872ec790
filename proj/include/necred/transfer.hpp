#ifndef NECRED_TRANSFER_HPP
#define NECRED_TRANSFER_HPP

#include "necred/code.hpp"
#include "necred/reduction.hpp"
#include "necred/verifier.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace necred {

/// Majority estimator for one branch, built from good-message statistics:
/// table[v] is the most frequent partner signal among good messages whose
/// observed signal is v (ties break to the numerically smallest candidate,
/// signals never observed map to 0). `mistakes` lists the good messages the
/// estimate gets wrong.
struct BranchEstimator {
    std::vector<std::uint64_t> table;     // indexed by the observed signal, size 2^n
    std::vector<std::uint64_t> mistakes;  // ascending
};

/// Estimates the b-signal of `branch` from its zp-signal.
BranchEstimator build_b_estimator(const CutImages& images, int branch);
/// Estimates the a-signal of `branch` from its b-signal.
BranchEstimator build_a_estimator(const CutImages& images, int branch);

struct EstimatorTables {
    int k = 0;
    int n = 0;
    std::string code_fingerprint;  // code the tables were computed from
    std::vector<BranchEstimator> b_from_zp;
    std::vector<BranchEstimator> a_from_b;
};

EstimatorTables build_estimators(const CutImages& images, const std::string& fingerprint);
nlohmann::json tables_to_json(const EstimatorTables& tables);

/// Conditional good-message classes of one branch, keyed by observed
/// signals. Message lists ascend.
struct BranchClasses {
    std::map<std::uint64_t, std::vector<std::uint64_t>> by_zp;
    std::map<std::uint64_t, std::map<std::uint64_t, std::vector<std::uint64_t>>> by_zp_b;
    std::map<std::uint64_t, std::vector<std::uint64_t>> by_a;
    std::map<std::uint64_t, std::map<std::uint64_t, std::vector<std::uint64_t>>> by_a_b;
    std::map<std::uint64_t, std::vector<std::uint64_t>> by_b;
};
BranchClasses branch_classes(const CutImages& images, int branch);

/// Assembles the multiple-unicast code from a rate-k gadget code and its
/// estimator tables: inner edges keep their encoders, and terminal i decodes
/// by reading the zp-encoder, estimating b then a, and relaying through the
/// z-encoder. Refuses codes whose fingerprint differs from the tables',
/// codes of rate other than k, and codes whose z-edges do not relay a.
NetworkCode transfer_code(const GadgetInstance& g, const NetworkCode& nec_code,
                          const EstimatorTables& tables);

/// Exact failure-event accounting for the transferred code. p_unseen is the
/// probability that a uniform message tuple falls outside the good z-image;
/// p_b_miss / p_a_miss are the per-branch estimator mistake probabilities.
struct TransferReport {
    int k = 0;
    Rat epsilon;                // gadget code error
    Rat p_unseen;
    std::vector<Rat> p_b_miss;
    std::vector<Rat> p_a_miss;
    Rat eps_tau;                // transferred code error
    Rat bound;                  // 6 k epsilon
    bool p_unseen_ok = false;   // p_unseen <= epsilon
    std::vector<bool> p_b_miss_ok;  // <= 2 epsilon
    std::vector<bool> p_a_miss_ok;  // <= 3 epsilon
    bool union_ok = false;      // eps_tau <= sum over branches of the three events
    bool bound_ok = false;      // eps_tau <= 6 k epsilon

    bool all_ok() const;
};
TransferReport transfer_report(const CutImages& images, const EstimatorTables& tables,
                               const Rat& epsilon, const Rat& eps_tau);
nlohmann::json transfer_report_to_json(const TransferReport& r);

/// Witness that two good messages sharing a zp-signal but disagreeing on the
/// b-signal force a b-vector outside the good image that still decodes to
/// one of them. The pattern rewrites x to its value under m2 (or y to its
/// value under m1); a coinciding signal yields the error-free pattern.
struct PairWitness {
    std::uint64_t b_vector = 0;
    std::uint64_t decoded_to = 0;
    ErrorPattern pattern;
    bool in_b_err = false;
    bool decodes_to_pair = false;
};
PairWitness confusable_pair_witness(const GadgetInstance& g, const EvalPlan& plan,
                                    const CutImages& images, int branch, std::uint64_t m1,
                                    std::uint64_t m2);

/// Iterative pair deletion over the class of one zp-signal: repeatedly
/// remove the lexicographically smallest message pair with differing
/// b-signals until the class is b-constant.
struct DeletionResult {
    std::uint64_t deleted_pairs = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;  // deletion order
    std::uint64_t final_size = 0;
    std::uint64_t largest_subclass = 0;  // max over b of |M(zp, b)|
};
DeletionResult class_pair_deletion(const CutImages& images, int branch, std::uint64_t zp_value);

/// For one a-class: replaying zp with each observed b-subclass value yields
/// (L-1)|M(a)| distinct b-vectors outside the good image, each decoding into
/// the class, where L counts the distinct b-signals of the class.
struct SwapWitnesses {
    std::vector<std::uint64_t> b_vectors;
    std::uint64_t class_size = 0;
    std::uint64_t b_value_count = 0;  // L
    bool all_verified = false;        // distinct, outside good image, decode into the class
};
SwapWitnesses zp_swap_witnesses(const GadgetInstance& g, const EvalPlan& plan,
                                const CutImages& images, int branch, std::uint64_t a_value);

/// Partition of a branch's a-signals into sparse classes (at most half of
/// 2^((k-1)n) messages) and full-enough classes with mixed b-signals, with
/// the size bounds both sides must obey for a code of error epsilon.
struct ClassPartition {
    std::vector<std::uint64_t> sparse_a;
    std::vector<std::uint64_t> mixed_a;
    std::uint64_t sparse_message_count = 0;
    std::uint64_t mixed_message_count = 0;
    bool cover_ok = false;     // a-estimator mistakes lie inside the two message sets
    bool sparse_a_ok = false;  // |sparse_a| <= 2 eps 2^n
    bool mixed_a_ok = false;   // |mixed_a| <= 2 eps 2^n
    bool sparse_m_ok = false;  // messages <= eps 2^{kn}
    bool mixed_m_ok = false;   // messages <= 2 eps 2^{kn}

    bool all_ok() const {
        return cover_ok && sparse_a_ok && mixed_a_ok && sparse_m_ok && mixed_m_ok;
    }
};
ClassPartition a_class_partition(const CutImages& images, int branch, const Rat& epsilon);

/// Full pipeline for one gadget code: normalize the z-edges to relays,
/// verify, build images and estimators, check every combinatorial bound and
/// witness construction, transfer, and verify the transferred code.
struct BranchAnalysis {
    int branch = 0;
    std::uint64_t b_mistake_count = 0;
    std::uint64_t a_mistake_count = 0;
    bool b_mistake_bound_ok = false;  // <= 2 eps 2^{kn}
    bool a_mistake_bound_ok = false;  // <= 3 eps 2^{kn}
    std::uint64_t deletion_total = 0;
    bool deletion_bound_ok = false;   // <= |B^err|
    bool deletion_shape_ok = false;   // per-class final size and count guarantees
    ClassPartition partition;
    bool pigeonhole_ok = false;       // every |M(b)| <= 2^{(k-1)n}
    std::uint64_t pair_witnesses_checked = 0;
    bool pair_witnesses_ok = false;
    bool pair_witnesses_distinct_ok = false;  // across the deleted pairs
    std::uint64_t swap_witness_total = 0;
    bool swap_witnesses_ok = false;
};

struct GadgetCodeAnalysis {
    std::string fingerprint;  // of the normalized code
    NetworkCode normalized;
    VerificationReport report;
    CutImages images;
    EstimatorTables tables;
    bool a_err_bound_ok = false;  // |A^err| <= eps 2^{kn}
    bool b_err_bound_ok = false;
    std::vector<BranchAnalysis> branches;
    NetworkCode transferred;
    MuReport mu_report;
    TransferReport transfer;

    bool all_ok() const;
};

GadgetCodeAnalysis analyze_gadget_code(const GadgetInstance& g, const NetworkCode& code,
                                       const VerifyOptions& opts = {});
nlohmann::json analysis_to_json(const GadgetCodeAnalysis& a);

}  // namespace necred

#endif
