#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "htpl/template.hpp"
#include "htpl/tree.hpp"

namespace htpl {

/// Stems η with 1 <= lgn(η) <= depth, by length then lexicographically.
/// Position i in this list is the predicate ψ_{i+1}.
std::vector<LeafStem> predicate_enumeration(const Template& t, int depth);

/// Equivalence relations on {0..elements-1} as restricted growth strings:
/// more blocks first, ties broken lexicographically. Index 0 is the
/// discrete relation, the last index the one-block relation.
std::vector<std::vector<int>> equivalence_relations(int elements);

/// Position of the relation "classes[i] == classes[j]" in
/// equivalence_relations(classes.size()).
int equality_code(const std::vector<int>& classes);

/// The type of a parameter tuple y_0..y_{k-2}: which entries coincide and
/// the leaf stem of each entry.
struct ParamType {
    std::vector<int> classes;
    StemTuple stems;
};

/// Discrete equality pattern over `stems`.
ParamType distinct_params(StemTuple stems);

struct SignatureFunction {
    std::vector<std::uint32_t> values;

    int depth() const { return static_cast<int>(values.size()); }
    friend bool operator==(const SignatureFunction&, const SignatureFunction&) = default;
};

/// f(0) is the equality code; f(m) for m >= 1 has bit j set iff ψ_m is a
/// prefix of the stem of y_j. Every stem must be at least as long as the
/// predicates being asked about.
SignatureFunction f_signature(const Template& t, const ParamType& p, int depth);

/// Number of predicates of length at most L.
std::uint64_t predicate_count(const Template& t, int length);

/// Least n such that f↾n fixes the stems up to length `length`: 0 when
/// length is 0, else 1 + predicate_count(length).
std::uint64_t signature_cover_index(const Template& t, int length);

/// Signature depth at which agreement provably transfers consistency of s
/// positive instances: signature_cover_index(t, m_star(t, s)).
std::uint64_t analytic_F_bound(const Template& t, int s);

/// Largest s >= 1 with analytic_F_bound(t, s) <= n, or 0 when none.
int G_analytic(const Template& t, std::uint64_t n);

struct SearchBudget {
    /// Parameter stems are drawn with this length and coordinates below
    /// `alphabet`; the parameters' leaves continue with zeros.
    int stem_depth = 2;
    int alphabet = 3;
    /// Search nodes allowed for each partition (first b tuple) of the space.
    std::uint64_t max_nodes = 2'000'000;
    int workers = 1;
};

/// Two families of s parameter tuples agreeing on f↾n position by position,
/// where the positive instances over `a` are consistent and those over `b`
/// are not.
struct OplusCertificate {
    int s = 0;
    std::uint64_t n = 0;
    /// Longest signature prefix on which the families still agree, capped
    /// at the signature depth searched. The certificate refutes ⊕ for every
    /// n' <= agreement.
    std::uint64_t agreement = 0;
    std::vector<StemTuple> a_family;
    std::vector<StemTuple> b_family;
    int b_failing_level = -1;
};

enum class OplusStatus {
    holds_up_to_budget,
    counterexample,
    budget_exhausted,
};

struct OplusResult {
    OplusStatus status = OplusStatus::holds_up_to_budget;
    std::optional<OplusCertificate> certificate;
    std::uint64_t nodes = 0;
};

OplusResult oplus_test(const Template& t, int s, std::uint64_t n, const SearchBudget& budget = {});

/// Re-checks a certificate from scratch: signature agreement up to n, a
/// consistent and b inconsistent under decide_positive_type.
bool verify_certificate(const Template& t, const OplusCertificate& cert);

struct FEstimate {
    int s = 0;
    std::uint64_t value = 0;
    /// Value comes from the complete-template shortcut or from reaching the
    /// analytic bound, not from a search that came up empty.
    bool analytic = false;
    std::uint64_t analytic_bound = 0;
    /// Some search in the sweep ran out of budget.
    bool exhausted = false;
    std::vector<OplusCertificate> certificates;
};

FEstimate F_estimate(const Template& t, int s, const SearchBudget& budget = {});

struct GEstimate {
    std::uint64_t n = 0;
    bool infinite = false;
    /// Largest s found passing; exact upper bound when `certificate` is set.
    int value = 0;
    int analytic_lower = 0;
    int searched_up_to = 0;
    bool exhausted = false;
    std::optional<OplusCertificate> certificate;
};

GEstimate G_estimate(const Template& t, std::uint64_t n, int s_cap, const SearchBudget& budget = {});

} // namespace htpl
