#include "necred/transfer.hpp"

#include <algorithm>
#include <set>

namespace necred {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

int good_index(const CutImages& images, std::uint64_t message) {
    auto it = std::lower_bound(images.messages.begin(), images.messages.end(), message);
    if (it == images.messages.end() || *it != message)
        fail("message " + std::to_string(message) + " is not a good message");
    return static_cast<int>(it - images.messages.begin());
}

int singleton_set_index(const GadgetInstance& g, const std::string& edge_id) {
    const std::vector<std::string> want{edge_id};
    for (std::size_t i = 0; i < g.nec.adversary_class.size(); ++i)
        if (g.nec.adversary_class[i] == want) return static_cast<int>(i);
    fail("edge " + edge_id + " is not an admissible error location");
}

ErrorPattern single_edge_pattern(const GadgetInstance& g, const std::string& edge_id,
                                 std::uint64_t mask) {
    ErrorPattern p;
    if (mask == 0) return p;  // signals coincide, nothing to corrupt
    p.realized_set = singleton_set_index(g, edge_id);
    p.masks.emplace_back(edge_id, mask);
    return p;
}

std::uint64_t pack_b(const GadgetInstance& g, const EvalResult& ev, int n) {
    std::uint64_t packed = 0;
    for (int i = 0; i < g.k(); ++i)
        packed |= ev.edge_values[g.nec.topo.edge_index(g.branches[i].b)] << (i * n);
    return packed;
}

BranchEstimator majority_estimator(const CutImages& images,
                                   const std::vector<std::uint64_t>& observed,
                                   const std::vector<std::uint64_t>& target, int branch) {
    const std::uint64_t space = std::uint64_t{1} << images.n;
    std::vector<std::map<std::uint64_t, std::uint64_t>> counts(space);
    for (std::size_t idx = 0; idx < images.messages.size(); ++idx)
        ++counts[images.coord(observed[idx], branch)][images.coord(target[idx], branch)];

    BranchEstimator est;
    est.table.assign(space, 0);
    for (std::uint64_t v = 0; v < space; ++v) {
        std::uint64_t best = 0, best_count = 0;
        for (const auto& [candidate, count] : counts[v]) {
            if (count > best_count) {  // map order makes ties resolve to the smallest
                best = candidate;
                best_count = count;
            }
        }
        est.table[v] = best;
    }
    for (std::size_t idx = 0; idx < images.messages.size(); ++idx)
        if (est.table[images.coord(observed[idx], branch)] != images.coord(target[idx], branch))
            est.mistakes.push_back(images.messages[idx]);
    return est;
}

}  // namespace

BranchEstimator build_b_estimator(const CutImages& images, int branch) {
    return majority_estimator(images, images.zp, images.b, branch);
}

BranchEstimator build_a_estimator(const CutImages& images, int branch) {
    return majority_estimator(images, images.b, images.a, branch);
}

EstimatorTables build_estimators(const CutImages& images, const std::string& fingerprint) {
    EstimatorTables tables;
    tables.k = images.k;
    tables.n = images.n;
    tables.code_fingerprint = fingerprint;
    for (int i = 0; i < images.k; ++i) {
        tables.b_from_zp.push_back(build_b_estimator(images, i));
        tables.a_from_b.push_back(build_a_estimator(images, i));
    }
    return tables;
}

BranchClasses branch_classes(const CutImages& images, int branch) {
    BranchClasses c;
    for (std::size_t idx = 0; idx < images.messages.size(); ++idx) {
        const std::uint64_t m = images.messages[idx];
        const std::uint64_t av = images.coord(images.a[idx], branch);
        const std::uint64_t bv = images.coord(images.b[idx], branch);
        const std::uint64_t zpv = images.coord(images.zp[idx], branch);
        c.by_zp[zpv].push_back(m);
        c.by_zp_b[zpv][bv].push_back(m);
        c.by_a[av].push_back(m);
        c.by_a_b[av][bv].push_back(m);
        c.by_b[bv].push_back(m);
    }
    return c;
}

NetworkCode transfer_code(const GadgetInstance& g, const NetworkCode& nec_code,
                          const EstimatorTables& tables) {
    const int k = g.k();
    const int n = nec_code.block_length;
    if (tables.code_fingerprint != code_fingerprint(nec_code))
        fail("estimator tables were built from a different code (fingerprint mismatch)");
    if (nec_code.message_widths != std::vector<int>{k * n})
        fail("transfer needs a rate-k code: message width must be " + std::to_string(k * n));

    // The z-edges must relay a in substance, so that reproducing the
    // estimated a-signal through the z-encoder yields the injected piece.
    std::vector<const LocalFunction*> z_fns(k);
    for (int i = 0; i < k; ++i) {
        const GadgetBranch& br = g.branches[i];
        auto it = nec_code.encoders.find(br.z);
        if (it == nec_code.encoders.end()) fail("code has no encoder for edge " + br.z);
        const int in_w[1] = {n};
        const LocalFunction expanded = expand_truth_table(it->second, in_w, n);
        const auto& table = std::get<TruthTable>(expanded.body).entries;
        for (std::uint64_t v = 0; v < table.size(); ++v)
            if (table[v] != v)
                fail("edge " + br.z + " does not relay " + br.a +
                     "; normalize the code before transferring");
        z_fns[i] = &it->second;
    }

    NetworkCode tau;
    tau.block_length = n;
    tau.message_widths.assign(k, n);

    const Topology& inner_topo = g.inner.topo;
    for (const Edge& e : inner_topo.net().edges) {
        auto it = nec_code.encoders.find(e.id);
        if (it == nec_code.encoders.end()) fail("code has no encoder for edge " + e.id);
        const LocalFunction& fn = it->second;
        const int tail = inner_topo.node_index(e.tail);
        const auto slots = g.inner.source_slots_at(tail);
        if (slots.size() > 1 && !fn.is_table()) {
            // Several z-slots merge into one message slot; go through a
            // layout-compatible table.
            std::vector<int> widths;
            for (int ei : inner_topo.in_edges(tail)) widths.push_back(n * inner_topo.edge(ei).capacity);
            for (std::size_t s = 0; s < slots.size(); ++s) widths.push_back(n);
            tau.encoders.emplace(e.id, expand_truth_table(fn, widths, n * e.capacity));
        } else {
            tau.encoders.emplace(e.id, fn);
        }
    }

    for (int i = 0; i < k; ++i) {
        const GadgetBranch& br = g.branches[i];
        auto zp_it = nec_code.encoders.find(br.zp);
        if (zp_it == nec_code.encoders.end()) fail("code has no encoder for edge " + br.zp);
        const LocalFunction& zp_fn = zp_it->second;

        const int terminal = inner_topo.node_index(br.inner_terminal);
        std::vector<int> widths;
        for (int ei : inner_topo.in_edges(terminal))
            widths.push_back(n * inner_topo.edge(ei).capacity);

        const auto& b_table = tables.b_from_zp[i].table;
        const auto& a_table = tables.a_from_b[i].table;
        const LocalFunction* z_fn = z_fns[i];
        tau.decoders.emplace(
            br.inner_terminal,
            tabulate(widths, n, [&](std::span<const std::uint64_t> inputs) {
                const std::uint64_t zp_value = eval_function(zp_fn, inputs, widths, n);
                const std::uint64_t a_hat = a_table[b_table[zp_value]];
                const std::uint64_t one[1] = {a_hat};
                const int one_w[1] = {n};
                return eval_function(*z_fn, one, one_w, n);
            }));
    }
    return tau;
}

bool TransferReport::all_ok() const {
    if (!p_unseen_ok || !union_ok || !bound_ok) return false;
    for (bool ok : p_b_miss_ok)
        if (!ok) return false;
    for (bool ok : p_a_miss_ok)
        if (!ok) return false;
    return true;
}

TransferReport transfer_report(const CutImages& images, const EstimatorTables& tables,
                               const Rat& epsilon, const Rat& eps_tau) {
    for (std::size_t idx = 0; idx < images.messages.size(); ++idx)
        if (images.z[idx] != images.a[idx])
            fail("z-image differs from a-image; the code is not relay-normalized");

    TransferReport r;
    r.k = images.k;
    r.epsilon = epsilon;
    r.eps_tau = eps_tau;
    const auto space = static_cast<std::int64_t>(images.vector_space());
    r.p_unseen = Rat(space - static_cast<std::int64_t>(images.messages.size()), space);
    r.p_unseen_ok = r.p_unseen <= epsilon;
    Rat union_bound(0);
    for (int i = 0; i < images.k; ++i) {
        // The z-image is injective on good messages, so each mistake set
        // contributes exactly one tuple per message.
        r.p_b_miss.emplace_back(
            static_cast<std::int64_t>(tables.b_from_zp[i].mistakes.size()), space);
        r.p_a_miss.emplace_back(
            static_cast<std::int64_t>(tables.a_from_b[i].mistakes.size()), space);
        r.p_b_miss_ok.push_back(r.p_b_miss.back() <= Rat(2) * epsilon);
        r.p_a_miss_ok.push_back(r.p_a_miss.back() <= Rat(3) * epsilon);
        union_bound += r.p_unseen + r.p_b_miss.back() + r.p_a_miss.back();
    }
    r.union_ok = eps_tau <= union_bound;
    r.bound = Rat(6 * images.k) * epsilon;
    r.bound_ok = eps_tau <= r.bound;
    return r;
}

PairWitness confusable_pair_witness(const GadgetInstance& g, const EvalPlan& plan,
                                    const CutImages& images, int branch, std::uint64_t m1,
                                    std::uint64_t m2) {
    const GadgetBranch& br = g.branches[branch];
    const int i1 = good_index(images, m1);
    const int i2 = good_index(images, m2);
    if (images.coord(images.zp[i1], branch) != images.coord(images.zp[i2], branch))
        fail("witness pair must share the zp-signal of the branch");
    const std::uint64_t b1 = images.coord(images.b[i1], branch);
    const std::uint64_t b2 = images.coord(images.b[i2], branch);
    if (b1 == b2) fail("witness pair must disagree on the b-signal of the branch");

    PairWitness w;
    // First try: rewrite x under m1 to its value under m2.
    const std::uint64_t x_mask =
        images.coord(images.x[i1], branch) ^ images.coord(images.x[i2], branch);
    w.pattern = single_edge_pattern(g, br.x, x_mask);
    EvalResult ev = plan.evaluate(m1, w.pattern);
    std::uint64_t b_vec = pack_b(g, ev, images.n);
    if (images.coord(b_vec, branch) == b1) {
        // The guard output did not move; then rewriting y under m2 must move it.
        const std::uint64_t y_mask =
            images.coord(images.y[i1], branch) ^ images.coord(images.y[i2], branch);
        w.pattern = single_edge_pattern(g, br.y, y_mask);
        ev = plan.evaluate(m2, w.pattern);
        b_vec = pack_b(g, ev, images.n);
    }
    w.b_vector = b_vec;
    w.decoded_to = ev.decoded[0];
    w.in_b_err = !images.b_vector_good(b_vec);
    w.decodes_to_pair = w.decoded_to == m1 || w.decoded_to == m2;
    return w;
}

DeletionResult class_pair_deletion(const CutImages& images, int branch, std::uint64_t zp_value) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> members;  // (message, b-signal)
    std::map<std::uint64_t, std::uint64_t> subclass_sizes;
    for (std::size_t idx = 0; idx < images.messages.size(); ++idx) {
        if (images.coord(images.zp[idx], branch) != zp_value) continue;
        const std::uint64_t bv = images.coord(images.b[idx], branch);
        members.emplace_back(images.messages[idx], bv);
        ++subclass_sizes[bv];
    }
    DeletionResult result;
    for (const auto& [bv, size] : subclass_sizes)
        result.largest_subclass = std::max(result.largest_subclass, size);

    while (true) {
        std::size_t first = members.size(), second = members.size();
        for (std::size_t i = 0; i + 1 < members.size() && first == members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                if (members[j].second != members[i].second) {
                    first = i;
                    second = j;
                    break;
                }
        if (first == members.size()) break;
        result.pairs.emplace_back(members[first].first, members[second].first);
        ++result.deleted_pairs;
        members.erase(members.begin() + second);  // higher index first
        members.erase(members.begin() + first);
    }
    result.final_size = members.size();
    return result;
}

SwapWitnesses zp_swap_witnesses(const GadgetInstance& g, const EvalPlan& plan,
                                const CutImages& images, int branch, std::uint64_t a_value) {
    const GadgetBranch& br = g.branches[branch];
    std::vector<int> members;
    std::map<std::uint64_t, int> representative;  // b-signal -> good index of the smallest member
    for (std::size_t idx = 0; idx < images.messages.size(); ++idx) {
        if (images.coord(images.a[idx], branch) != a_value) continue;
        members.push_back(static_cast<int>(idx));
        representative.emplace(images.coord(images.b[idx], branch), static_cast<int>(idx));
    }
    if (members.empty()) fail("no good message has that a-signal on the branch");

    SwapWitnesses result;
    result.class_size = members.size();
    result.b_value_count = representative.size();
    result.all_verified = true;
    std::set<std::uint64_t> distinct;
    for (int idx0 : members) {
        const std::uint64_t m0 = images.messages[idx0];
        const std::uint64_t b0 = images.coord(images.b[idx0], branch);
        for (const auto& [b_target, idx_j] : representative) {
            if (b_target == b0) continue;
            const std::uint64_t zp_mask = images.coord(images.zp[idx0], branch) ^
                                          images.coord(images.zp[idx_j], branch);
            const ErrorPattern pattern = single_edge_pattern(g, br.zp, zp_mask);
            const EvalResult ev = plan.evaluate(m0, pattern);
            const std::uint64_t b_vec = pack_b(g, ev, images.n);
            result.b_vectors.push_back(b_vec);
            distinct.insert(b_vec);
            if (images.b_vector_good(b_vec) || ev.decoded[0] != m0) result.all_verified = false;
        }
    }
    if (distinct.size() != result.b_vectors.size()) result.all_verified = false;
    if (result.b_vectors.size() != (result.b_value_count - 1) * result.class_size)
        result.all_verified = false;
    return result;
}

ClassPartition a_class_partition(const CutImages& images, int branch, const Rat& epsilon) {
    const std::uint64_t signal_space = std::uint64_t{1} << images.n;
    const std::uint64_t coclass_space = std::uint64_t{1} << ((images.k - 1) * images.n);
    BranchClasses classes = branch_classes(images, branch);

    ClassPartition part;
    std::set<std::uint64_t> sparse_set, mixed_set;
    for (std::uint64_t av = 0; av < signal_space; ++av) {
        auto it = classes.by_a.find(av);
        const std::uint64_t size = it == classes.by_a.end() ? 0 : it->second.size();
        if (2 * size <= coclass_space) {
            part.sparse_a.push_back(av);
            sparse_set.insert(av);
            part.sparse_message_count += size;
        } else if (classes.by_a_b.at(av).size() > 1) {
            part.mixed_a.push_back(av);
            mixed_set.insert(av);
            part.mixed_message_count += size;
        }
    }

    const BranchEstimator est = build_a_estimator(images, branch);
    part.cover_ok = true;
    for (std::uint64_t m : est.mistakes) {
        const std::uint64_t av = images.coord(images.a[good_index(images, m)], branch);
        if (!sparse_set.count(av) && !mixed_set.count(av)) part.cover_ok = false;
    }

    const Rat space(static_cast<std::int64_t>(images.vector_space()));
    const Rat signals(static_cast<std::int64_t>(signal_space));
    part.sparse_a_ok = Rat(static_cast<std::int64_t>(part.sparse_a.size())) <= Rat(2) * epsilon * signals;
    part.mixed_a_ok = Rat(static_cast<std::int64_t>(part.mixed_a.size())) <= Rat(2) * epsilon * signals;
    part.sparse_m_ok = Rat(static_cast<std::int64_t>(part.sparse_message_count)) <= epsilon * space;
    part.mixed_m_ok =
        Rat(static_cast<std::int64_t>(part.mixed_message_count)) <= Rat(2) * epsilon * space;
    return part;
}

bool GadgetCodeAnalysis::all_ok() const {
    if (!a_err_bound_ok || !b_err_bound_ok || !transfer.all_ok()) return false;
    for (const BranchAnalysis& ba : branches) {
        if (!ba.b_mistake_bound_ok || !ba.a_mistake_bound_ok || !ba.deletion_bound_ok ||
            !ba.deletion_shape_ok || !ba.partition.all_ok() || !ba.pigeonhole_ok ||
            !ba.pair_witnesses_ok || !ba.pair_witnesses_distinct_ok || !ba.swap_witnesses_ok)
            return false;
    }
    return true;
}

GadgetCodeAnalysis analyze_gadget_code(const GadgetInstance& g, const NetworkCode& code,
                                       const VerifyOptions& opts) {
    check_gadget_shape(g);
    std::vector<std::pair<std::string, std::string>> relay_pairs;
    for (const GadgetBranch& br : g.branches) relay_pairs.emplace_back(br.a, br.z);

    GadgetCodeAnalysis a;
    a.normalized = normalize_relay(g.nec, code, relay_pairs);
    a.fingerprint = code_fingerprint(a.normalized);
    a.report = verify_nec(g.nec, a.normalized, opts);

    const int k = g.k();
    const int n = a.normalized.block_length;
    if (a.report.message_width != k * n)
        fail("analysis covers rate-k codes only: message width must be " + std::to_string(k * n));

    a.images = cut_images(g, a.normalized, a.report);
    a.tables = build_estimators(a.images, a.fingerprint);

    const Rat eps = a.report.epsilon;
    const Rat space(static_cast<std::int64_t>(a.images.vector_space()));
    a.a_err_bound_ok = Rat(static_cast<std::int64_t>(a.images.a_err_count())) <= eps * space;
    a.b_err_bound_ok = Rat(static_cast<std::int64_t>(a.images.b_err_count())) <= eps * space;

    const EvalPlan plan = EvalPlan::build(g.nec, a.normalized);
    const std::uint64_t coclass_space = std::uint64_t{1} << ((k - 1) * n);
    for (int i = 0; i < k; ++i) {
        BranchAnalysis ba;
        ba.branch = i;
        ba.b_mistake_count = a.tables.b_from_zp[i].mistakes.size();
        ba.a_mistake_count = a.tables.a_from_b[i].mistakes.size();
        ba.b_mistake_bound_ok =
            Rat(static_cast<std::int64_t>(ba.b_mistake_count)) <= Rat(2) * eps * space;
        ba.a_mistake_bound_ok =
            Rat(static_cast<std::int64_t>(ba.a_mistake_count)) <= Rat(3) * eps * space;

        const BranchClasses classes = branch_classes(a.images, i);

        ba.deletion_shape_ok = true;
        ba.pair_witnesses_ok = true;
        ba.pair_witnesses_distinct_ok = true;
        std::set<std::uint64_t> deleted_pair_vectors;
        std::uint64_t deleted_pair_count = 0;
        for (const auto& [zp_value, members] : classes.by_zp) {
            const DeletionResult dr = class_pair_deletion(a.images, i, zp_value);
            ba.deletion_total += dr.deleted_pairs;
            if (dr.final_size > dr.largest_subclass) ba.deletion_shape_ok = false;
            if (2 * dr.deleted_pairs + dr.largest_subclass < members.size())
                ba.deletion_shape_ok = false;
            for (const auto& [m1, m2] : dr.pairs) {
                const PairWitness w = confusable_pair_witness(g, plan, a.images, i, m1, m2);
                deleted_pair_vectors.insert(w.b_vector);
                ++deleted_pair_count;
            }
            // Every qualifying pair, deleted or not, must yield a valid witness.
            for (std::size_t p = 0; p < members.size(); ++p)
                for (std::size_t q = p + 1; q < members.size(); ++q) {
                    const std::uint64_t m1 = members[p], m2 = members[q];
                    const int ip = good_index(a.images, m1);
                    const int iq = good_index(a.images, m2);
                    if (a.images.coord(a.images.b[ip], i) == a.images.coord(a.images.b[iq], i))
                        continue;
                    const PairWitness w = confusable_pair_witness(g, plan, a.images, i, m1, m2);
                    ++ba.pair_witnesses_checked;
                    if (!w.in_b_err || !w.decodes_to_pair) ba.pair_witnesses_ok = false;
                }
        }
        ba.deletion_bound_ok = ba.deletion_total <= a.images.b_err_count();
        if (deleted_pair_vectors.size() != deleted_pair_count)
            ba.pair_witnesses_distinct_ok = false;

        ba.partition = a_class_partition(a.images, i, eps);

        ba.pigeonhole_ok = true;
        for (const auto& [bv, members] : classes.by_b)
            if (members.size() > coclass_space) ba.pigeonhole_ok = false;

        ba.swap_witnesses_ok = true;
        for (const auto& [av, members] : classes.by_a) {
            const SwapWitnesses sw = zp_swap_witnesses(g, plan, a.images, i, av);
            ba.swap_witness_total += sw.b_vectors.size();
            if (!sw.all_verified) ba.swap_witnesses_ok = false;
        }
        a.branches.push_back(std::move(ba));
    }

    a.transferred = transfer_code(g, a.normalized, a.tables);
    a.mu_report = verify_mu(g.inner, a.transferred, opts);
    a.transfer = transfer_report(a.images, a.tables, eps, a.mu_report.epsilon);
    return a;
}

using nlohmann::json;

nlohmann::json tables_to_json(const EstimatorTables& tables) {
    json b_from_zp = json::array(), a_from_b = json::array();
    json b_mistakes = json::array(), a_mistakes = json::array();
    for (int i = 0; i < tables.k; ++i) {
        b_from_zp.push_back(tables.b_from_zp[i].table);
        a_from_b.push_back(tables.a_from_b[i].table);
        b_mistakes.push_back(tables.b_from_zp[i].mistakes);
        a_mistakes.push_back(tables.a_from_b[i].mistakes);
    }
    return json{{"k", tables.k},
                {"n", tables.n},
                {"code_fingerprint", tables.code_fingerprint},
                {"b_from_zp", b_from_zp},
                {"a_from_b", a_from_b},
                {"b_mistakes", b_mistakes},
                {"a_mistakes", a_mistakes}};
}

nlohmann::json transfer_report_to_json(const TransferReport& r) {
    json p_b = json::array(), p_a = json::array();
    for (const Rat& v : r.p_b_miss) p_b.push_back(rat_to_json(v));
    for (const Rat& v : r.p_a_miss) p_a.push_back(rat_to_json(v));
    return json{{"epsilon", rat_to_json(r.epsilon)},
                {"p_unseen", rat_to_json(r.p_unseen)},
                {"p_b_miss", p_b},
                {"p_a_miss", p_a},
                {"eps_tau", rat_to_json(r.eps_tau)},
                {"bound_6k_eps", rat_to_json(r.bound)},
                {"holds", r.all_ok()}};
}

nlohmann::json analysis_to_json(const GadgetCodeAnalysis& a) {
    json branches = json::array();
    for (const BranchAnalysis& ba : a.branches) {
        branches.push_back(
            {{"branch", ba.branch + 1},
             {"b_mistakes", ba.b_mistake_count},
             {"a_mistakes", ba.a_mistake_count},
             {"b_mistake_bound_ok", ba.b_mistake_bound_ok},
             {"a_mistake_bound_ok", ba.a_mistake_bound_ok},
             {"deletion_total", ba.deletion_total},
             {"deletion_bound_ok", ba.deletion_bound_ok},
             {"deletion_shape_ok", ba.deletion_shape_ok},
             {"partition",
              {{"sparse_a", ba.partition.sparse_a.size()},
               {"mixed_a", ba.partition.mixed_a.size()},
               {"sparse_messages", ba.partition.sparse_message_count},
               {"mixed_messages", ba.partition.mixed_message_count},
               {"ok", ba.partition.all_ok()}}},
             {"pigeonhole_ok", ba.pigeonhole_ok},
             {"pair_witnesses_checked", ba.pair_witnesses_checked},
             {"pair_witnesses_ok", ba.pair_witnesses_ok && ba.pair_witnesses_distinct_ok},
             {"swap_witnesses", ba.swap_witness_total},
             {"swap_witnesses_ok", ba.swap_witnesses_ok}});
    }
    return json{{"code_fingerprint", a.fingerprint},
                {"epsilon", rat_to_json(a.report.epsilon)},
                {"good_count", a.report.good.size()},
                {"pattern_count", a.report.pattern_count},
                {"a_err_count", a.images.a_err_count()},
                {"b_err_count", a.images.b_err_count()},
                {"a_err_bound_ok", a.a_err_bound_ok},
                {"b_err_bound_ok", a.b_err_bound_ok},
                {"branches", branches},
                {"transfer", transfer_report_to_json(a.transfer)},
                {"eps_tau", rat_to_json(a.mu_report.epsilon)},
                {"all_ok", a.all_ok()}};
}

}  // namespace necred
