#ifndef NECRED_CODE_HPP
#define NECRED_CODE_HPP

#include "necred/common.hpp"
#include "necred/network.hpp"

#include <json.hpp>

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace necred {

constexpr std::uint64_t kDefaultTableLimit = std::uint64_t{1} << 24;

/// Explicit truth table: entry index packs the input tuple with input 0 in
/// the least significant bits; bit 0 of every signal is the least
/// significant bit.
struct TruthTable {
    std::vector<std::uint64_t> entries;
};

/// Structured function form. Evaluates against an ordered tuple of input
/// signals; `slice` and `concat` address the concatenation of all inputs
/// (input 0 lowest). `compose` lists the outermost function first; inner
/// stages feed the next stage as its single input.
struct FnExpr {
    enum class Kind { relay, xor_all, constant, slice, concat, compose };
    Kind kind = Kind::relay;
    int input = 0;              // relay: input slot index
    std::uint64_t value = 0;    // constant
    int width = -1;             // constant: explicit width, -1 = infer from context
    int lo = 0, hi = 0;         // slice: inclusive bit range
    std::vector<FnExpr> parts;  // xor_all, concat, compose

    static FnExpr relay_of(int input);
    static FnExpr xor_of(std::vector<FnExpr> parts);
    static FnExpr constant_of(std::uint64_t value, int width = -1);
    static FnExpr slice_of(int lo, int hi);
    static FnExpr concat_of(std::vector<FnExpr> parts);
    static FnExpr compose_of(std::vector<FnExpr> parts);
};

struct LocalFunction {
    std::variant<TruthTable, FnExpr> body;

    bool is_table() const { return std::holds_alternative<TruthTable>(body); }
    static LocalFunction table(std::vector<std::uint64_t> entries);
    static LocalFunction expr(FnExpr e);
};

/// Applies a local function to one input tuple. Widths are in bits; the
/// result is checked against output_width. Throws ValidationError on any
/// arity or width mismatch.
std::uint64_t eval_function(const LocalFunction& fn, std::span<const std::uint64_t> inputs,
                            std::span<const int> input_widths, int output_width);

/// Semantically identical explicit table; idempotent on tables.
LocalFunction expand_truth_table(const LocalFunction& fn, std::span<const int> input_widths,
                                 int output_width, std::uint64_t max_entries = kDefaultTableLimit);

/// Builds a truth table by enumerating `f` over every input tuple.
template <typename F>
LocalFunction tabulate(std::span<const int> input_widths, int output_width, F&& f,
                       std::uint64_t max_entries = kDefaultTableLimit) {
    int total = 0;
    for (int w : input_widths) total += w;
    if (total > 60 || (std::uint64_t{1} << total) > max_entries)
        throw LimitError("truth table domain exceeds limit");
    std::vector<std::uint64_t> entries(std::uint64_t{1} << total);
    std::vector<std::uint64_t> inputs(input_widths.size());
    for (std::uint64_t idx = 0; idx < entries.size(); ++idx) {
        std::uint64_t rest = idx;
        for (std::size_t j = 0; j < input_widths.size(); ++j) {
            inputs[j] = rest & bit_mask(input_widths[j]);
            rest >>= input_widths[j];
        }
        entries[idx] = f(std::span<const std::uint64_t>(inputs)) & bit_mask(output_width);
    }
    return LocalFunction::table(std::move(entries));
}

/// A length-n network code: one encoder per edge, one decoder per terminal,
/// and the message bit width of every source slot. Source slot i occupies
/// bits [offset_i, offset_i + width_i) of the packed message, offsets
/// accumulating in slot order.
struct NetworkCode {
    int block_length = 1;
    std::vector<int> message_widths;
    std::map<std::string, LocalFunction> encoders;
    std::map<std::string, LocalFunction> decoders;

    int total_message_width() const;
};

/// Sparse xor error assignment. realized_set indexes the adversary-class
/// member it realizes (-1 for the error-free pattern). Under strict
/// semantics every edge of the realized set carries a nonzero mask.
struct ErrorPattern {
    int realized_set = -1;
    std::vector<std::pair<std::string, std::uint64_t>> masks;
};

struct EvalResult {
    std::vector<std::uint64_t> edge_values;  // transported signal per edge index
    std::vector<std::uint64_t> decoded;      // per terminal, pair order (NEC: one entry)
};

/// Binds a code to an instance: resolves input slots, checks arities and
/// widths once, and then evaluates (message, pattern) pairs cheaply.
/// Immutable after build; evaluate may run concurrently.
class EvalPlan {
  public:
    static EvalPlan build(const MultipleUnicastInstance& inst, const NetworkCode& code);
    static EvalPlan build(const NECInstance& inst, const NetworkCode& code);

    // Steps point into the plan's own function map.
    EvalPlan(const EvalPlan&) = delete;
    EvalPlan& operator=(const EvalPlan&) = delete;
    EvalPlan(EvalPlan&&) = default;
    EvalPlan& operator=(EvalPlan&&) = default;

    struct Piece {
        int lo = 0;
        int width = 0;
    };

    int message_width() const { return message_width_; }
    int block_length() const { return code_.block_length; }
    int edge_width(int edge) const { return edge_widths_.at(edge); }
    int terminal_count() const { return static_cast<int>(terminals_.size()); }
    /// Message bits that terminal `t` must reproduce.
    Piece expected_piece(int t) const { return terminals_.at(t).expected; }
    /// Message bits owned by source slot `i`.
    Piece message_piece(int i) const { return pieces_.at(i); }
    const Topology& topo() const { return topo_; }
    const NetworkCode& code() const { return code_; }

    struct Resolved {
        int realized_set = -1;
        std::vector<std::pair<int, std::uint64_t>> masks;  // edge index -> mask
    };
    /// Checks that masked edges exist and masks fit the edge width; nonzero
    /// masks are required for edges of a realized set.
    Resolved resolve(const ErrorPattern& pattern) const;

    EvalResult evaluate(std::uint64_t message, const Resolved& pattern) const;
    EvalResult evaluate(std::uint64_t message, const ErrorPattern& pattern) const;
    EvalResult evaluate(std::uint64_t message) const;

  private:
    EvalPlan() = default;

    struct Slot {
        int edge = -1;                     // input edge index, or -1 for the message slot
        std::vector<Piece> msg_segments;   // message slot: packed segments, low bits first
        int width = 0;
    };
    struct Step {
        int edge = -1;                     // target edge; -1 for a terminal step
        const LocalFunction* fn = nullptr;
        std::vector<Slot> slots;
        std::vector<int> widths;
        int out_width = 0;
        Piece expected;                    // terminals only
    };

    void finish(const std::vector<std::vector<Piece>>& msg_segments_by_node,
                const std::vector<std::pair<int, Piece>>& terminal_nodes);

    std::uint64_t gather(const Step& step, std::size_t slot, std::uint64_t message,
                         const std::vector<std::uint64_t>& edge_values) const;

    Topology topo_;
    NetworkCode code_;
    int message_width_ = 0;
    std::vector<Piece> pieces_;
    std::vector<int> edge_widths_;
    std::vector<Step> edge_steps_;  // topological order
    std::vector<Step> terminals_;
};

/// Rewrites the code so that each `relay_edge` simply forwards the signal of
/// its `source_edge`, displacing whatever processing the relay edge applied
/// into every consumer at the relay edge's head node. Error-free behaviour
/// is preserved exactly, and the rewritten code never decodes worse under
/// any admissible pattern. Codes already in relay form are returned
/// unchanged.
NetworkCode normalize_relay(const NECInstance& inst, const NetworkCode& code,
                            std::span<const std::pair<std::string, std::string>> source_relay_pairs);

/// Content digest of the canonical JSON serialization.
std::string code_fingerprint(const NetworkCode& code);

nlohmann::json code_to_json(const NetworkCode& code);
NetworkCode code_from_json(const nlohmann::json& j);
NetworkCode load_code_file(const std::string& path);

}  // namespace necred

#endif
