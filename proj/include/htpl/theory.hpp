#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "htpl/template.hpp"
#include "htpl/tree.hpp"

namespace htpl {

/// A finite structure for the level-m theory. Each element carries its leaf
/// truncated to length m; Q_η holds of an element iff η is a prefix of that
/// stem, so the refinement and partition axioms hold by construction. R is a
/// set of k-element subsets of element indices, stored as increasing tuples.
struct FiniteModel {
    int arity = 2;
    int level = 0;
    std::vector<LeafStem> leaves;
    std::set<Tuple> edges;

    std::size_t size() const { return leaves.size(); }

    friend bool operator==(const FiniteModel&, const FiniteModel&) = default;
};

bool holds_Q(const FiniteModel& model, int element, const LeafStem& eta);

enum class ViolationKind {
    arity_mismatch,
    malformed_leaf,
    bad_edge_shape,
    forbidden_edge,
};

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    /// Element index for malformed leaves, otherwise -1.
    int element = -1;
    Tuple edge;
    /// First level whose coordinate tuple is a non-edge (forbidden edges).
    int level = -1;
    std::string detail;
};

struct ViolationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

ViolationReport check_model(const Template& t, const FiniteModel& model);

/// Copy with leaves truncated to `level` (<= model.level). Edges survive:
/// fewer levels forbid fewer edges.
FiniteModel restrict_level(const FiniteModel& model, int level);

/// Union of M1 and M2 over M0. emb1[i] / emb2[i] is the image of M0's
/// element i in M1 / M2. The result lists M1's elements first, then M2's
/// elements outside the image of emb2, in their original order.
FiniteModel amalgamate(const Template& t, int m, const FiniteModel& m0, const FiniteModel& m1,
                       const FiniteModel& m2, const std::vector<int>& emb1,
                       const std::vector<int>& emb2);

/// count_per_leaf elements on every length-m stem (lexicographic order), and
/// each allowed k-subset an edge with probability edge_prob.
FiniteModel build_random_model(const Template& t, int m, int count_per_leaf, double edge_prob,
                               std::uint64_t seed);

struct ClosureReport {
    FiniteModel model;
    std::uint64_t added = 0;
    std::uint64_t passes = 0;
    /// True when a full pass found every formula realized.
    bool fixpoint = false;
};

/// Complete qf formulas over at most s distinct parameters that are
/// consistent with the level-m theory but have no realization in the model.
/// The shape of such a formula: the parameter set, the leaf of x, and which
/// (k-1)-subsets of the parameters x is R-related to.
struct UnrealizedFormula {
    std::vector<int> params;
    LeafStem x_leaf;
    std::vector<Tuple> positive;
};

/// Up to `limit` unrealized consistent formulas, in enumeration order
/// (parameter sets by size then lexicographically, leaves lexicographically,
/// edge patterns by mask).
std::vector<UnrealizedFormula> unrealized_formulas(const Template& t, const FiniteModel& model,
                                                   int s, std::size_t limit);

/// Adds witnesses until every consistent complete qf formula with at most s
/// parameters is realized, or until element_budget elements have been added.
/// A witness gets exactly the edges to the parameters that its formula asks
/// for; its edges to other elements are drawn at random (probability 1/2,
/// allowed subsets only) so that the process can settle.
ClosureReport close_existentially(const Template& t, const FiniteModel& model, int s,
                                  std::uint64_t element_budget, std::uint64_t seed);

} // namespace htpl
