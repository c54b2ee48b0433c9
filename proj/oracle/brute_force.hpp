#pragma once

// Brute-force reference implementations. They share the data types with the
// library but none of its algorithms: every answer comes from enumerating
// the definition directly, so agreement with the library is evidence.

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "htpl/template.hpp"
#include "htpl/tree.hpp"
#include "htpl/typecheck.hpp"

namespace htpl::oracle {

/// Edge test from the stored uniform edge list alone.
bool literal_edge(const Hypergraph& h, const std::vector<int>& tuple);

std::optional<int> witness(const Hypergraph& h, const std::vector<Tuple>& tuples);

/// Every sequence of t tuples of k-1 vertices has a common witness.
bool extension(const Hypergraph& h, int t);

std::optional<std::vector<int>> clique(const Hypergraph& h, int size);
std::optional<std::vector<int>> independent(const Hypergraph& h, int size);

/// Scans n upward and checks f on the window [n, horizon).
int m_star(const Template& t, int count);

struct PositiveVerdict {
    bool consistent = false;
    /// Lexicographically least x stem of length `depth` that works.
    LeafStem witness;
};

/// Tries every x stem of length `depth` in lexicographic order. Parameter
/// stems are padded with zeros.
PositiveVerdict positive_type(const Template& t, const PositiveTypeSpec& spec, int depth);

/// Builds the one structure the formula describes (one element per equality
/// class plus x) and checks it against the level-m axioms.
bool qf_formula(const Template& t, int m, const QfFormulaSpec& spec);

/// Counts partner tuples by enumerating every (k-1)-tuple of stems.
std::uint64_t edge_partners(const Template& t, const LeafStem& rho, int depth);

/// All k-uniform hypergraphs on `size` vertices, as edge lists.
std::vector<Hypergraph> all_hypergraphs(int arity, int size);

} // namespace htpl::oracle

#include "htpl/rng.hpp"

namespace htpl::oracle {

/// Small random template for oracle runs: k in {2,3}, level sizes k..4,
/// prefix depth 1..4.
Template tiny_template(std::uint64_t seed);

/// Random positive spec over `t`: up to 3 tuples of stems of one common
/// length 1..prefix depth, and an x stem half the time.
PositiveTypeSpec tiny_spec(const Template& t, Rng& rng);

} // namespace htpl::oracle
