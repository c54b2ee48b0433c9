#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "htpl/template.hpp"

namespace htpl {

/// A finite path through the tree of level-wise vertex choices: coordinate
/// n picks a vertex of level n. A full leaf is represented by a stem; the
/// levels past it are left to the algorithms (see complete_to_leaf).
class LeafStem {
public:
    LeafStem() = default;
    explicit LeafStem(std::vector<int> path) : path_(std::move(path)) {}
    LeafStem(std::initializer_list<int> path) : path_(path) {}

    std::size_t length() const noexcept { return path_.size(); }
    bool empty() const noexcept { return path_.empty(); }
    int operator[](std::size_t n) const { return path_[n]; }
    const std::vector<int>& path() const noexcept { return path_; }

    LeafStem prefix(std::size_t len) const;
    LeafStem extended(int vertex) const;
    /// Pads with vertex 0 up to `len`; longer stems are returned unchanged.
    LeafStem zero_extended(std::size_t len) const;
    /// η ⊴ ν: this stem is an initial segment of `other`.
    bool is_prefix_of(const LeafStem& other) const;

    friend auto operator<=>(const LeafStem&, const LeafStem&) = default;
    friend bool operator==(const LeafStem&, const LeafStem&) = default;

private:
    std::vector<int> path_;
};

/// (k-1) stems: the leaves of one parameter tuple.
using StemTuple = std::vector<LeafStem>;

bool in_tree(const Template& t, const LeafStem& stem);

/// All stems of the given length in lexicographic order.
std::vector<LeafStem> all_stems(const Template& t, int length);

/// Finite-depth E_∞: the k stems (common length L) form an edge at every
/// level below L.
bool einfty_prefix(const Template& t, std::span<const LeafStem> stems);

/// Extends `nu` to `target_len`, appending at each level the least vertex
/// that keeps an edge with every constraint tuple. Requires
/// lgn(nu) > m_star(t, constraints.size()) (when there are constraints) and
/// the edge condition below lgn(nu); under those, a missing witness means
/// the template overstates its Extension arity and ConsistencyError is
/// raised.
LeafStem complete_to_leaf(const Template& t, const LeafStem& nu,
                          const std::vector<StemTuple>& constraints, std::size_t target_len);

/// Number of (k-1)-tuples of stems σ of length `depth` with
/// einfty_prefix(ρ↾depth, σ). Stem coordinates are independent across
/// levels, so the count factors into a product of per-level counts, each
/// found by enumerating that level's (k-1)-tuples. `budget` caps the tuples
/// visited; exceeding it, or overflowing 64 bits, throws BudgetError with a
/// lower bound.
std::uint64_t enumerate_edge_partners(const Template& t, const LeafStem& rho, int depth,
                                      std::uint64_t budget = 50'000'000);

} // namespace htpl
