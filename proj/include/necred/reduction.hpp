#ifndef NECRED_REDUCTION_HPP
#define NECRED_REDUCTION_HPP

#include "necred/code.hpp"
#include "necred/network.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace necred {

/// Names of the nodes and edges added for one branch of the reduction.
/// Branch i wraps inner pair (s_i, t_i): the source feeds a_i into relay
/// node A_i, which fans out the duplicate pair x_i, y_i to guard node B_i
/// and injects z_i into the inner network at s_i; t_i reports its decoding
/// over zp_i to B_i, and B_i forwards b_i to the terminal.
struct GadgetBranch {
    std::string a, x, y, z, zp, b;            // edge ids
    std::string relay_node, guard_node;       // added nodes
    std::string inner_source, inner_terminal; // pair endpoints inside the inner network
};

/// A single-unicast error-correction instance wrapping a multiple-unicast
/// instance. The adversary may corrupt any single edge except the a- and
/// b-edges. Edge order: inner edges first (unchanged), then per-branch
/// groups a.i, x.i, y.i, z.i, zp.i, b.i.
struct GadgetInstance {
    NECInstance nec;
    MultipleUnicastInstance inner;  // the instance the gadget was built from
    std::string source, terminal;
    std::vector<GadgetBranch> branches;

    int k() const { return static_cast<int>(branches.size()); }
};

/// Builds the gadget for a validated multiple-unicast instance. All added
/// edges have unit capacity; identical inputs produce structurally identical
/// gadgets.
GadgetInstance build_gadget(const MultipleUnicastInstance& inner);

/// Machine-checks every structural invariant of the gadget shape; throws
/// ValidationError naming the first violation.
void check_gadget_shape(const GadgetInstance& g);

/// Lifts a unit-rate code for the inner instance to a rate-k code for the
/// gadget: the source splits its kn-bit message into k pieces, a/x/y/z relay
/// piece i into the inner network, zp carries the inner decoding, and each
/// guard node forwards x when x and y agree and falls back to zp otherwise.
/// The lifted code never errs on a message the inner code decodes, for any
/// single admissible edge error.
NetworkCode backward_embed(const GadgetInstance& g, const NetworkCode& mu_code);

nlohmann::json gadget_to_json(const GadgetInstance& g);
GadgetInstance gadget_from_json(const nlohmann::json& j);
GadgetInstance load_gadget_file(const std::string& path);

}  // namespace necred

#endif
