#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "htpl/vertex_set.hpp"

namespace htpl {

/// A sequence of vertex indices. Edges are stored as increasing tuples.
using Tuple = std::vector<int>;

inline constexpr int kMaxArity = 16;

/// One level of a template: a finite k-full hypergraph on vertices
/// 0..size-1.
///
/// Only the k-uniform part (k-subsets of distinct vertices) is stored;
/// every tuple with fewer than k distinct entries is an edge by definition
/// and is answered at query time. Uniform edges live in a bitset indexed by
/// the colexicographic rank of the subset. A complete hypergraph keeps no
/// bitset at all, so tail levels of arbitrary size are cheap to build.
class Hypergraph {
public:
    /// Edgeless on `size` vertices (only the repetition edges hold).
    Hypergraph(int arity, int size);

    /// `uniform_edges` may list each k-subset in any vertex order and with
    /// duplicates; anything that is not k distinct in-range vertices throws
    /// InputError.
    Hypergraph(int arity, int size, const std::vector<Tuple>& uniform_edges);

    static Hypergraph complete(int arity, int size);

    int arity() const noexcept { return arity_; }
    int size() const noexcept { return size_; }

    /// Edge membership for an arbitrary k-tuple; permutation invariant.
    bool is_edge(std::span<const int> tuple) const;
    bool is_edge(std::initializer_list<int> tuple) const {
        return is_edge(std::span<const int>(tuple.begin(), tuple.size()));
    }

    /// Adds or removes the uniform edge on k distinct vertices.
    void set_uniform_edge(std::span<const int> vertices, bool present);

    /// All uniform edges as increasing tuples in lexicographic order.
    std::vector<Tuple> uniform_edges() const;
    std::uint64_t uniform_edge_count() const;

    /// True when every k-subset is a uniform edge.
    bool is_complete() const;

    /// The vertices s for which <s> followed by `partial` (k-1 entries) is an
    /// edge.
    VertexSet witness_set(std::span<const int> partial) const;

    friend bool operator==(const Hypergraph& a, const Hypergraph& b);

private:
    void check_tuple(std::span<const int> tuple, std::size_t expected_length) const;
    void materialize();
    bool has_sorted_distinct(const int* sorted) const;
    std::uint64_t rank(const int* sorted) const;
    std::uint64_t binom(int n, int r) const { return binom_[static_cast<std::size_t>(n) * (arity_ + 1) + r]; }

    int arity_;
    int size_;
    bool complete_ = false;
    std::uint64_t subset_count_ = 0;
    std::vector<std::uint64_t> binom_;
    std::vector<std::uint64_t> bits_;
};

/// Least s with <s>^tuple an edge for every given (k-1)-tuple.
std::optional<int> extension_witness(const Hypergraph& h, const std::vector<Tuple>& tuples);

struct ExtensionOptions {
    /// Search nodes the exhaustive check may visit before it falls back to
    /// sampling.
    std::uint64_t node_budget = 20'000'000;
    std::uint64_t sample_trials = 20'000;
    std::uint64_t seed = 0;
};

struct ExtensionReport {
    bool holds = true;
    /// False when the verdict "holds" comes from sampling only.
    bool exhaustive = true;
    /// The t tuples without a common witness, when holds is false.
    std::vector<Tuple> counterexample;
    std::uint64_t nodes = 0;
};

/// Extension property at arity t: every choice of t (k-1)-tuples has a
/// common witness.
///
/// Each (k-1)-tuple τ determines the witness set W(τ). A counterexample is a
/// family of at most t such sets with empty intersection, so the search runs
/// over subfamilies of the inclusion-minimal witness sets rather than over
/// all size^{t(k-1)} tuple choices. The two are equivalent: repeated tuples,
/// tuples with repeated entries (W = everything), and tuples whose witness
/// set contains another's never help a counterexample.
ExtensionReport check_extension_property(const Hypergraph& h, int t,
                                         const ExtensionOptions& options = {});

inline bool has_extension_property(const Hypergraph& h, int t) {
    return check_extension_property(h, t).holds;
}

/// Lexicographically least set of `size` vertices all of whose k-sequences
/// are edges.
std::optional<std::vector<int>> find_k_full_clique(const Hypergraph& h, int size);

/// Lexicographically least set of `size` >= k vertices containing no uniform
/// edge.
std::optional<std::vector<int>> find_k_independent(const Hypergraph& h, int size);

} // namespace htpl
