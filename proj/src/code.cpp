#include "necred/code.hpp"

#include <algorithm>
#include <numeric>

namespace necred {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

struct Val {
    std::uint64_t value = 0;
    int width = 0;
};

struct Ctx {
    std::span<const std::uint64_t> inputs;
    std::span<const int> widths;
};

std::uint64_t pack_tuple(std::span<const std::uint64_t> values, std::span<const int> widths,
                         int* total_width = nullptr) {
    std::uint64_t packed = 0;
    int off = 0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        packed |= (values[j] & bit_mask(widths[j])) << off;
        off += widths[j];
    }
    if (total_width) *total_width = off;
    return packed;
}

int infer_width(const FnExpr& e, std::span<const int> widths) {
    switch (e.kind) {
        case FnExpr::Kind::relay:
            return e.input >= 0 && e.input < static_cast<int>(widths.size()) ? widths[e.input]
                                                                             : -1;
        case FnExpr::Kind::constant:
            return e.width;
        case FnExpr::Kind::slice:
            return e.hi - e.lo + 1;
        case FnExpr::Kind::concat: {
            int total = 0;
            for (const FnExpr& p : e.parts) {
                int w = infer_width(p, widths);
                if (w < 0) return -1;
                total += w;
            }
            return total;
        }
        case FnExpr::Kind::xor_all:
            for (const FnExpr& p : e.parts) {
                int w = infer_width(p, widths);
                if (w >= 0) return w;
            }
            return -1;
        case FnExpr::Kind::compose:
            return e.parts.empty() ? -1 : infer_width(e.parts.front(), widths);
    }
    return -1;
}

Val eval_expr(const FnExpr& e, Ctx ctx, int expected) {
    switch (e.kind) {
        case FnExpr::Kind::relay: {
            if (e.input < 0 || e.input >= static_cast<int>(ctx.inputs.size()))
                fail("relay input " + std::to_string(e.input) + " out of range");
            int w = ctx.widths[e.input];
            if (expected >= 0 && w != expected)
                fail("relay of a " + std::to_string(w) + "-bit input where " +
                     std::to_string(expected) + " bits are required");
            return {ctx.inputs[e.input], w};
        }
        case FnExpr::Kind::constant: {
            int w = e.width >= 0 ? e.width : expected;
            if (w < 0) fail("constant width cannot be inferred; give it an explicit width");
            if (expected >= 0 && w != expected) fail("constant width mismatch");
            if (e.value > bit_mask(w)) fail("constant value does not fit its width");
            return {e.value, w};
        }
        case FnExpr::Kind::xor_all: {
            if (e.parts.empty()) fail("xor needs at least one operand");
            int w = expected;
            if (w < 0)
                for (const FnExpr& p : e.parts) {
                    w = infer_width(p, ctx.widths);
                    if (w >= 0) break;
                }
            if (w < 0) fail("xor width cannot be inferred");
            std::uint64_t acc = 0;
            for (const FnExpr& p : e.parts) acc ^= eval_expr(p, ctx, w).value;
            return {acc, w};
        }
        case FnExpr::Kind::slice: {
            int total = 0;
            std::uint64_t packed = pack_tuple(ctx.inputs, ctx.widths, &total);
            if (e.lo < 0 || e.lo > e.hi || e.hi >= total)
                fail("slice [" + std::to_string(e.lo) + "," + std::to_string(e.hi) +
                     "] out of range for " + std::to_string(total) + " input bits");
            int w = e.hi - e.lo + 1;
            if (expected >= 0 && w != expected) fail("slice width mismatch");
            return {(packed >> e.lo) & bit_mask(w), w};
        }
        case FnExpr::Kind::concat: {
            if (e.parts.empty()) fail("concat needs at least one operand");
            std::uint64_t acc = 0;
            int off = 0;
            for (const FnExpr& p : e.parts) {
                Val v = eval_expr(p, ctx, infer_width(p, ctx.widths));
                acc |= v.value << off;
                off += v.width;
            }
            if (expected >= 0 && off != expected) fail("concat width mismatch");
            return {acc, off};
        }
        case FnExpr::Kind::compose: {
            if (e.parts.empty()) fail("compose needs at least one stage");
            const int last = static_cast<int>(e.parts.size()) - 1;
            Val cur = eval_expr(e.parts[last], ctx, last == 0 ? expected : -1);
            for (int i = last - 1; i >= 0; --i) {
                const std::uint64_t in[1] = {cur.value};
                const int w[1] = {cur.width};
                cur = eval_expr(e.parts[i], Ctx{in, w}, i == 0 ? expected : -1);
            }
            return cur;
        }
    }
    fail("corrupt function expression");
}

int total_width_of(std::span<const int> widths) {
    int total = std::accumulate(widths.begin(), widths.end(), 0);
    if (total > 60) throw LimitError("input tuple wider than 60 bits");
    return total;
}

}  // namespace

FnExpr FnExpr::relay_of(int input) {
    FnExpr e;
    e.kind = Kind::relay;
    e.input = input;
    return e;
}

FnExpr FnExpr::xor_of(std::vector<FnExpr> parts) {
    FnExpr e;
    e.kind = Kind::xor_all;
    e.parts = std::move(parts);
    return e;
}

FnExpr FnExpr::constant_of(std::uint64_t value, int width) {
    FnExpr e;
    e.kind = Kind::constant;
    e.value = value;
    e.width = width;
    return e;
}

FnExpr FnExpr::slice_of(int lo, int hi) {
    FnExpr e;
    e.kind = Kind::slice;
    e.lo = lo;
    e.hi = hi;
    return e;
}

FnExpr FnExpr::concat_of(std::vector<FnExpr> parts) {
    FnExpr e;
    e.kind = Kind::concat;
    e.parts = std::move(parts);
    return e;
}

FnExpr FnExpr::compose_of(std::vector<FnExpr> parts) {
    FnExpr e;
    e.kind = Kind::compose;
    e.parts = std::move(parts);
    return e;
}

LocalFunction LocalFunction::table(std::vector<std::uint64_t> entries) {
    return LocalFunction{TruthTable{std::move(entries)}};
}

LocalFunction LocalFunction::expr(FnExpr e) { return LocalFunction{std::move(e)}; }

std::uint64_t eval_function(const LocalFunction& fn, std::span<const std::uint64_t> inputs,
                            std::span<const int> input_widths, int output_width) {
    if (inputs.size() != input_widths.size()) fail("input tuple and width list disagree");
    if (const auto* table = std::get_if<TruthTable>(&fn.body)) {
        int total = total_width_of(input_widths);
        if (table->entries.size() != (std::uint64_t{1} << total))
            fail("truth table has " + std::to_string(table->entries.size()) + " entries, expected " +
                 std::to_string(std::uint64_t{1} << total));
        std::uint64_t entry = table->entries[pack_tuple(inputs, input_widths)];
        if (entry > bit_mask(output_width)) fail("truth table entry exceeds the output width");
        return entry;
    }
    Val v = eval_expr(std::get<FnExpr>(fn.body), Ctx{inputs, input_widths}, output_width);
    return v.value & bit_mask(v.width);
}

LocalFunction expand_truth_table(const LocalFunction& fn, std::span<const int> input_widths,
                                 int output_width, std::uint64_t max_entries) {
    int total = total_width_of(input_widths);
    if ((std::uint64_t{1} << total) > max_entries)
        throw LimitError("truth table domain of 2^" + std::to_string(total) +
                         " entries exceeds the limit of " + std::to_string(max_entries));
    if (fn.is_table()) {
        // Validate and return as-is.
        const auto& entries = std::get<TruthTable>(fn.body).entries;
        if (entries.size() != (std::uint64_t{1} << total)) fail("truth table size mismatch");
        for (std::uint64_t e : entries)
            if (e > bit_mask(output_width)) fail("truth table entry exceeds the output width");
        return fn;
    }
    return tabulate(
        input_widths, output_width,
        [&](std::span<const std::uint64_t> inputs) {
            return eval_function(fn, inputs, input_widths, output_width);
        },
        max_entries);
}

int NetworkCode::total_message_width() const {
    return std::accumulate(message_widths.begin(), message_widths.end(), 0);
}

namespace {

// Segments of the packed message hosted at each node, slot order.
std::vector<std::vector<EvalPlan::Piece>> message_segments_by_node(
    const Topology& topo, const std::vector<int>& slot_nodes,
    const std::vector<EvalPlan::Piece>& pieces) {
    std::vector<std::vector<EvalPlan::Piece>> by_node(topo.node_count());
    for (std::size_t i = 0; i < slot_nodes.size(); ++i)
        by_node[slot_nodes[i]].push_back(pieces[i]);
    return by_node;
}

}  // namespace

EvalPlan EvalPlan::build(const MultipleUnicastInstance& inst, const NetworkCode& code) {
    const int k = inst.pair_count();
    if (static_cast<int>(code.message_widths.size()) != k)
        fail("code declares " + std::to_string(code.message_widths.size()) +
             " message widths for " + std::to_string(k) + " source slots");
    if (code.block_length < 1) fail("block length must be positive");
    std::vector<Piece> pieces(k);
    int off = 0;
    for (int i = 0; i < k; ++i) {
        if (code.message_widths[i] < 1) fail("message width must be positive");
        pieces[i] = {off, code.message_widths[i]};
        off += code.message_widths[i];
    }
    if (off > 48) throw LimitError("message space wider than 48 bits");
    std::vector<int> slot_nodes(k);
    std::vector<std::pair<int, Piece>> terminals(k);
    for (int i = 0; i < k; ++i) {
        slot_nodes[i] = inst.source_node(i);
        terminals[i] = {inst.terminal_node(i), pieces[i]};
    }
    EvalPlan plan;
    plan.topo_ = inst.topo;
    plan.code_ = code;
    plan.pieces_ = pieces;
    plan.message_width_ = off;
    plan.finish(message_segments_by_node(inst.topo, slot_nodes, pieces), terminals);
    return plan;
}

EvalPlan EvalPlan::build(const NECInstance& inst, const NetworkCode& code) {
    if (code.message_widths.size() != 1)
        fail("a single-source code must declare exactly one message width");
    if (code.message_widths[0] < 1) fail("message width must be positive");
    if (code.message_widths[0] > 48) throw LimitError("message space wider than 48 bits");
    if (code.block_length < 1) fail("block length must be positive");
    std::vector<Piece> pieces{{0, code.message_widths[0]}};
    std::vector<int> slot_nodes{inst.source_node()};
    std::vector<std::pair<int, Piece>> terminals{{inst.terminal_node(), pieces[0]}};
    EvalPlan plan;
    plan.topo_ = inst.topo;
    plan.code_ = code;
    plan.pieces_ = pieces;
    plan.message_width_ = pieces[0].width;
    plan.finish(message_segments_by_node(inst.topo, slot_nodes, pieces), terminals);
    return plan;
}

void EvalPlan::finish(const std::vector<std::vector<Piece>>& msg_segments_by_node,
                      const std::vector<std::pair<int, Piece>>& terminal_nodes) {
    const Topology& topo = topo_;
    edge_widths_.resize(topo.edge_count());
    for (int e = 0; e < topo.edge_count(); ++e)
        edge_widths_[e] = code_.block_length * topo.edge(e).capacity;
    for (int w : edge_widths_)
        if (w > 60) throw LimitError("edge signal wider than 60 bits");

    // Encoders read the tail node's in-edges plus the message slot when the
    // node hosts a source; decoders read the terminal's in-edges only.
    auto make_slots = [&](int node, bool include_message) {
        std::vector<Slot> slots;
        std::vector<int> widths;
        for (int ei : topo.in_edges(node)) {
            slots.push_back(Slot{ei, {}, edge_widths_[ei]});
            widths.push_back(edge_widths_[ei]);
        }
        if (include_message && !msg_segments_by_node[node].empty()) {
            Slot s;
            s.edge = -1;
            s.msg_segments = msg_segments_by_node[node];
            for (const Piece& p : s.msg_segments) s.width += p.width;
            widths.push_back(s.width);
            slots.push_back(std::move(s));
        }
        return std::make_pair(std::move(slots), std::move(widths));
    };

    std::set<std::string> used_encoders;
    for (int ei : topo.topo_edges()) {
        const Edge& edge = topo.edge(ei);
        auto it = code_.encoders.find(edge.id);
        if (it == code_.encoders.end()) fail("code has no encoder for edge " + edge.id);
        used_encoders.insert(edge.id);
        Step step;
        step.edge = ei;
        step.fn = &it->second;
        auto [slots, widths] = make_slots(topo.node_index(edge.tail), true);
        step.slots = std::move(slots);
        step.widths = std::move(widths);
        step.out_width = edge_widths_[ei];
        edge_steps_.push_back(std::move(step));
    }
    for (const auto& [id, fn] : code_.encoders) {
        (void)fn;
        if (!used_encoders.count(id)) fail("encoder for unknown edge " + id);
    }

    std::set<std::string> used_decoders;
    for (const auto& [node, expected] : terminal_nodes) {
        const std::string& id = topo_.node(node);
        auto it = code_.decoders.find(id);
        if (it == code_.decoders.end()) fail("code has no decoder for terminal " + id);
        used_decoders.insert(id);
        Step step;
        step.fn = &it->second;
        auto [slots, widths] = make_slots(node, false);
        step.slots = std::move(slots);
        step.widths = std::move(widths);
        step.out_width = expected.width;
        step.expected = expected;
        terminals_.push_back(std::move(step));
    }
    for (const auto& [id, fn] : code_.decoders) {
        (void)fn;
        if (!used_decoders.count(id)) fail("decoder for non-terminal node " + id);
    }

    // One dry run catches arity and width problems up front: width errors in
    // expressions do not depend on input values, and tables are checked in
    // full here.
    std::vector<std::uint64_t> zeros;
    for (const Step& step : edge_steps_) {
        if (step.fn->is_table())
            expand_truth_table(*step.fn, step.widths, step.out_width);
        else {
            zeros.assign(step.widths.size(), 0);
            eval_function(*step.fn, zeros, step.widths, step.out_width);
        }
    }
    for (const Step& step : terminals_) {
        if (step.fn->is_table())
            expand_truth_table(*step.fn, step.widths, step.out_width);
        else {
            zeros.assign(step.widths.size(), 0);
            eval_function(*step.fn, zeros, step.widths, step.out_width);
        }
    }
}

EvalPlan::Resolved EvalPlan::resolve(const ErrorPattern& pattern) const {
    Resolved r;
    r.realized_set = pattern.realized_set;
    for (const auto& [id, mask] : pattern.masks) {
        if (!topo_.has_edge(id)) fail("pattern masks an edge not in the instance: " + id);
        int ei = topo_.edge_index(id);
        if (mask == 0) fail("error mask on " + id + " must be nonzero");
        if (mask > bit_mask(edge_widths_[ei])) fail("error mask on " + id + " exceeds edge width");
        r.masks.emplace_back(ei, mask);
    }
    return r;
}

std::uint64_t EvalPlan::gather(const Step& step, std::size_t slot, std::uint64_t message,
                               const std::vector<std::uint64_t>& edge_values) const {
    const Slot& s = step.slots[slot];
    if (s.edge >= 0) return edge_values[s.edge];
    std::uint64_t acc = 0;
    int off = 0;
    for (const Piece& p : s.msg_segments) {
        acc |= ((message >> p.lo) & bit_mask(p.width)) << off;
        off += p.width;
    }
    return acc;
}

EvalResult EvalPlan::evaluate(std::uint64_t message, const Resolved& pattern) const {
    EvalResult result;
    result.edge_values.assign(edge_widths_.size(), 0);
    std::vector<std::uint64_t> inputs;
    for (const Step& step : edge_steps_) {
        inputs.resize(step.slots.size());
        for (std::size_t j = 0; j < step.slots.size(); ++j)
            inputs[j] = gather(step, j, message, result.edge_values);
        std::uint64_t out = eval_function(*step.fn, inputs, step.widths, step.out_width);
        for (const auto& [ei, mask] : pattern.masks)
            if (ei == step.edge) out ^= mask;
        result.edge_values[step.edge] = out;
    }
    for (const Step& step : terminals_) {
        inputs.resize(step.slots.size());
        for (std::size_t j = 0; j < step.slots.size(); ++j)
            inputs[j] = gather(step, j, message, result.edge_values);
        result.decoded.push_back(eval_function(*step.fn, inputs, step.widths, step.out_width));
    }
    return result;
}

EvalResult EvalPlan::evaluate(std::uint64_t message, const ErrorPattern& pattern) const {
    return evaluate(message, resolve(pattern));
}

EvalResult EvalPlan::evaluate(std::uint64_t message) const { return evaluate(message, Resolved{}); }

NetworkCode normalize_relay(const NECInstance& inst, const NetworkCode& code,
                            std::span<const std::pair<std::string, std::string>> source_relay_pairs) {
    const Topology& topo = inst.topo;
    const int n = code.block_length;
    NetworkCode out = code;
    for (const auto& [a_id, z_id] : source_relay_pairs) {
        const int z = topo.edge_index(z_id);
        const int a = topo.edge_index(a_id);
        const int tail = topo.node_index(topo.edge(z).tail);
        const auto& ins = topo.in_edges(tail);
        if (ins.size() != 1 || ins[0] != a)
            fail("edge " + a_id + " must be the only input of " + z_id + "'s tail node");
        if (tail == inst.source_node())
            fail("relay tail hosts the source; nothing to displace");
        const int w_a = n * topo.edge(a).capacity;
        const int w_z = n * topo.edge(z).capacity;
        if (w_a != w_z)
            fail("displaced processing would not fit: " + a_id + " and " + z_id +
                 " carry different widths");

        auto it = out.encoders.find(z_id);
        if (it == out.encoders.end()) fail("code has no encoder for edge " + z_id);
        const int in_w[1] = {w_a};
        LocalFunction expanded = expand_truth_table(it->second, in_w, w_z);
        const auto& table = std::get<TruthTable>(expanded.body).entries;
        bool identity = true;
        for (std::uint64_t i = 0; i < table.size(); ++i)
            if (table[i] != i) {
                identity = false;
                break;
            }
        if (identity) continue;  // already a relay in substance

        out.encoders[z_id] = LocalFunction::expr(FnExpr::relay_of(0));

        // Every consumer of the relay edge applies the displaced map to that
        // input slot before its old processing.
        const int head = topo.node_index(topo.edge(z).head);
        auto displace = [&](const LocalFunction& fn, int node, int out_width) {
            const auto& node_ins = topo.in_edges(node);
            std::vector<int> widths;
            widths.reserve(node_ins.size() + 1);
            int z_slot = -1;
            for (std::size_t j = 0; j < node_ins.size(); ++j) {
                if (node_ins[j] == z) z_slot = static_cast<int>(j);
                widths.push_back(n * topo.edge(node_ins[j]).capacity);
            }
            if (node == inst.source_node()) widths.push_back(code.total_message_width());
            if (z_slot < 0) fail("internal error: consumer does not read " + z_id);
            return tabulate(widths, out_width, [&](std::span<const std::uint64_t> raw) {
                std::vector<std::uint64_t> mapped(raw.begin(), raw.end());
                mapped[z_slot] = table[mapped[z_slot]];
                return eval_function(fn, mapped, widths, out_width);
            });
        };
        for (int c : topo.out_edges(head)) {
            const std::string& cid = topo.edge(c).id;
            auto cit = out.encoders.find(cid);
            if (cit == out.encoders.end()) fail("code has no encoder for edge " + cid);
            cit->second = displace(cit->second, head, n * topo.edge(c).capacity);
        }
        if (head == inst.terminal_node()) {
            auto dit = out.decoders.find(inst.terminal);
            if (dit == out.decoders.end()) fail("code has no decoder for terminal " + inst.terminal);
            dit->second = displace(dit->second, head, code.total_message_width());
        }
    }
    return out;
}

using nlohmann::json;

namespace {

json expr_to_json(const FnExpr& e) {
    switch (e.kind) {
        case FnExpr::Kind::relay:
            return json{{"relay", e.input}};
        case FnExpr::Kind::constant: {
            json j{{"const", e.value}};
            if (e.width >= 0) j["width"] = e.width;
            return j;
        }
        case FnExpr::Kind::slice:
            return json{{"slice", {{"lo", e.lo}, {"hi", e.hi}}}};
        case FnExpr::Kind::xor_all:
        case FnExpr::Kind::concat:
        case FnExpr::Kind::compose: {
            json parts = json::array();
            for (const FnExpr& p : e.parts) parts.push_back(expr_to_json(p));
            const char* key = e.kind == FnExpr::Kind::xor_all  ? "xor"
                              : e.kind == FnExpr::Kind::concat ? "concat"
                                                               : "compose";
            return json{{key, parts}};
        }
    }
    fail("corrupt function expression");
}

FnExpr expr_from_json(const json& j);

std::vector<FnExpr> parts_from_json(const json& arr) {
    std::vector<FnExpr> parts;
    for (const auto& p : arr) parts.push_back(expr_from_json(p));
    return parts;
}

FnExpr expr_from_json(const json& j) {
    if (!j.is_object()) fail("function form must be a JSON object");
    if (j.contains("relay")) return FnExpr::relay_of(j.at("relay").get<int>());
    if (j.contains("const"))
        return FnExpr::constant_of(j.at("const").get<std::uint64_t>(),
                                   j.value("width", -1));
    if (j.contains("slice"))
        return FnExpr::slice_of(j.at("slice").at("lo").get<int>(),
                                j.at("slice").at("hi").get<int>());
    if (j.contains("xor")) return FnExpr::xor_of(parts_from_json(j.at("xor")));
    if (j.contains("concat")) return FnExpr::concat_of(parts_from_json(j.at("concat")));
    if (j.contains("compose")) return FnExpr::compose_of(parts_from_json(j.at("compose")));
    fail("unknown function form: " + j.dump());
}

json fn_to_json(const LocalFunction& f) {
    if (f.is_table()) return json{{"table", std::get<TruthTable>(f.body).entries}};
    return expr_to_json(std::get<FnExpr>(f.body));
}

LocalFunction fn_from_json(const json& j) {
    if (j.is_object() && j.contains("table"))
        return LocalFunction::table(j.at("table").get<std::vector<std::uint64_t>>());
    return LocalFunction::expr(expr_from_json(j));
}

}  // namespace

nlohmann::json code_to_json(const NetworkCode& code) {
    json encoders = json::object();
    for (const auto& [id, fn] : code.encoders) encoders[id] = fn_to_json(fn);
    json decoders = json::object();
    for (const auto& [id, fn] : code.decoders) decoders[id] = fn_to_json(fn);
    return json{{"block_length", code.block_length},
                {"message_widths", code.message_widths},
                {"encoders", encoders},
                {"decoders", decoders}};
}

NetworkCode code_from_json(const nlohmann::json& j) {
    NetworkCode code;
    try {
        code.block_length = j.at("block_length").get<int>();
        code.message_widths = j.at("message_widths").get<std::vector<int>>();
        for (const auto& [id, fn] : j.at("encoders").items())
            code.encoders.emplace(id, fn_from_json(fn));
        for (const auto& [id, fn] : j.at("decoders").items())
            code.decoders.emplace(id, fn_from_json(fn));
    } catch (const json::exception& ex) {
        fail(std::string("bad code description: ") + ex.what());
    }
    return code;
}

NetworkCode load_code_file(const std::string& path) {
    return code_from_json(read_json_file(path));
}

std::string code_fingerprint(const NetworkCode& code) {
    return hex_digest(fnv1a(code_to_json(code).dump()));
}

}  // namespace necred
