#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "htpl/template.hpp"
#include "htpl/tree.hpp"

namespace htpl {

/// Least level n with f(n') >= count for every n' >= n. The tail policy's f
/// is strictly increasing, so this always exists.
int m_star(const Template& t, int count);

/// {R(x, ā_i) : i < t} together with an optional Q-constraint on x. Each
/// parameter tuple holds k-1 stems, all of one common length.
struct PositiveTypeSpec {
    std::optional<LeafStem> x_stem;
    std::vector<StemTuple> params;
};

struct PositiveTypeDecision {
    bool consistent = false;
    /// Least witness per level, of length `depth`; empty when inconsistent.
    LeafStem witness;
    /// First level without a witness, -1 when consistent.
    int failing_level = -1;
    int depth = 0;
};

/// Smallest check depth for which decide_positive_type is sound:
/// max(L, m_star(t, max(1, #params)) + 1).
int required_check_depth(const Template& t, const PositiveTypeSpec& spec);

/// Decides consistency of a positive R-type with the limit theory.
///
/// Levels are independent: level ℓ only constrains x(ℓ), and needs a vertex
/// forming an edge with ρ^i(ℓ) for every parameter tuple i. Levels at or past
/// m_star have one by Extension, so checking below `check_depth` settles the
/// whole leaf. Parameter stems shorter than the depth are extended by the
/// least vertex at each level (complete_to_leaf with no constraints), and the
/// check runs at least as deep as x_stem.
PositiveTypeDecision decide_positive_type(const Template& t, const PositiveTypeSpec& spec,
                                          int check_depth);
PositiveTypeDecision decide_positive_type(const Template& t, const PositiveTypeSpec& spec);

/// A complete quantifier-free formula φ(x, a_1..a_n) at level m. Parameter
/// indices are 0-based here. `classes` is the equality pattern: a_i = a_j iff
/// classes[i] == classes[j]. `positive` (C) and `negative` (D) partition the
/// increasing (k-1)-tuples of parameter indices.
struct QfFormulaSpec {
    std::vector<LeafStem> params;
    std::vector<int> classes;
    std::vector<Tuple> positive;
    std::vector<Tuple> negative;
    LeafStem x_leaf;
    /// x = a_i demanded.
    std::optional<int> x_equals;
};

/// Increasing tuples of length `len` over 0..n-1, lexicographic.
std::vector<Tuple> increasing_tuples(int n, int len);

/// Spec with distinct parameters and D the complement of C.
QfFormulaSpec make_qf_spec(std::vector<LeafStem> params, LeafStem x_leaf,
                           std::vector<Tuple> positive, int arity);

/// Consistency of φ with T^m (or, with for_limit_theory, with the limit
/// theory). Negative edges never constrain beyond the clash check: inside
/// allowed tuples R behaves like a random hypergraph.
bool decide_qf_formula(const Template& t, int m, const QfFormulaSpec& spec, bool for_limit_theory);

struct TransferCounterexample {
    QfFormulaSpec formula;
    /// The one-level extensions of the parameter leaves that broke agreement.
    std::vector<LeafStem> extended_params;
    bool consistent_at_m_star = false;
    bool consistent_at_next = false;
    std::uint64_t trial = 0;
};

struct TransferReport {
    int m = 0;
    int m_star = 0;
    std::uint64_t trials = 0;
    std::uint64_t consistent_trials = 0;
    std::uint64_t extensions_checked = 0;
    std::vector<TransferCounterexample> counterexamples;
};

/// Samples complete qf formulas with n < m parameters and at most m positive
/// edges, with leaves at level m_star(t, m), and checks that consistency at
/// m_star agrees with consistency at m_star + 1 under every one-level
/// extension of the parameter leaves (some extension of x must work exactly
/// when the formula is consistent at m_star).
TransferReport transfer_check(const Template& t, int m, std::uint64_t trials, std::uint64_t seed,
                              int workers = 1);

} // namespace htpl
