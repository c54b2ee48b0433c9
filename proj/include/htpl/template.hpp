#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "htpl/hypergraph.hpp"

namespace htpl {

enum class TailKind {
    complete_growing,
    /// Same as complete_growing with growth fixed at 1.
    repeat_last_complete,
};

/// How levels past the stored prefix are generated: level n is the complete
/// k-full hypergraph on H_last + g·(n − last) vertices with f(n) = H_n.
struct TailPolicy {
    TailKind kind = TailKind::complete_growing;
    int growth = 1;

    int effective_growth() const { return kind == TailKind::repeat_last_complete ? 1 : growth; }

    friend bool operator==(const TailPolicy&, const TailPolicy&) = default;
};

struct Level {
    Hypergraph graph;
    int f;

    friend bool operator==(const Level&, const Level&) = default;
};

/// A template of arity k: infinitely many levels, given as a finite stored
/// prefix plus a tail policy. Construction checks the representation (shared
/// arity, non-empty prefix, growth ≥ 1) but not the template axioms; use
/// validate() for those, since the corruption harness needs to hold
/// templates that break them.
class Template {
public:
    Template(int arity, std::vector<Level> prefix, TailPolicy tail = {});

    int arity() const noexcept { return arity_; }
    int prefix_depth() const noexcept { return static_cast<int>(prefix_.size()); }
    const std::vector<Level>& prefix() const noexcept { return prefix_; }
    const TailPolicy& tail() const noexcept { return tail_; }

    /// Total: stored level when n is in the prefix, else the tail level.
    Level level(int n) const;
    const Hypergraph& stored_graph(int n) const { return prefix_.at(static_cast<std::size_t>(n)).graph; }

    int level_size(int n) const;
    int f(int n) const;

    /// Every stored level is complete (the tail always is).
    bool everywhere_complete() const;

    /// Level hypergraphs 0..depth-1, for loops that visit levels repeatedly.
    std::vector<Hypergraph> graphs(int depth) const;

    friend bool operator==(const Template&, const Template&) = default;

private:
    int arity_;
    std::vector<Level> prefix_;
    TailPolicy tail_;
};

/// Template whose level n is complete on first_size + growth·n vertices with
/// f(n) = H_n; with the defaults this is H_n = n + 1.
Template complete_template(int arity, int prefix_depth = 1, int first_size = 1, int growth = 1);

enum class Condition {
    arity,
    f_positive,
    f_bound,
    extension,
};

std::string to_string(Condition c);

struct LevelIssue {
    int level;
    Condition condition;
    std::string detail;
    std::vector<Tuple> counterexample;
};

struct ValidationReport {
    int depth = 0;
    bool valid = true;
    /// False when some level's Extension verdict relied on sampling.
    bool exhaustive = true;
    std::vector<LevelIssue> issues;
};

/// Checks the template axioms on levels 0..depth-1. Tail levels pass
/// analytically: a complete level satisfies Extension for every t.
ValidationReport validate(const Template& t, int depth, const ExtensionOptions& options = {});

/// Largest t ≤ cap with the Extension property, 0 if none.
int max_extension_arity(const Hypergraph& h, int cap);

struct RandomTemplateOptions {
    int retry_budget = 32;
    TailPolicy tail{};
};

/// Levels sampled as G(n, p) k-uniform hypergraphs, each checked for
/// Extension at its target f and resampled on failure; after the retry
/// budget the last sample is kept with f lowered to max_extension_arity.
/// Targets above the level size are clamped to it.
Template random_template(int arity, std::span<const int> level_sizes, double edge_prob,
                         std::span<const int> target_f, std::uint64_t seed,
                         const RandomTemplateOptions& options = {});

} // namespace htpl
