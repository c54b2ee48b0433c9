#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "htpl/template.hpp"
#include "htpl/tree.hpp"

namespace htpl {

/// One positive instance R(x, ā_α): the limit parameter tuple and its
/// approximation at every index.
struct Instance {
    StemTuple limit;
    /// per_index[t] has stems of length depths[t].
    std::vector<StemTuple> per_index;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Finite stand-in for the index model: N indices with depths i_t, and Λ
/// instances whose limit family is consistent.
struct Scenario {
    Template tmpl;
    std::vector<int> depths;
    std::vector<Instance> instances;

    int index_count() const { return static_cast<int>(depths.size()); }
    int instance_count() const { return static_cast<int>(instances.size()); }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws InputError when shapes, stem lengths or tree membership are off,
/// and when the limit family is inconsistent.
void check_scenario(const Scenario& sc);

/// n(α,t): the longest prefix, at most i_t, on which the signatures of
/// ā_α[t] and ā_α agree.
int agreement_level(const Scenario& sc, int alpha, int t);

/// G as a table indexed by n; nullopt is ∞.
using GTable = std::vector<std::optional<int>>;

GTable g_table_analytic(const Template& t, int size);

/// s(α,t) = G(n(α,t)); nullopt is ∞.
std::optional<int> capacity(const Scenario& sc, int alpha, int t, const GTable& g);

struct DistributionOptions {
    /// Use min − 1 instead of min for the per-index bound.
    bool strict = false;
    /// Cap on |d(α)|; 0 means no cap.
    int max_per_instance = 0;
};

struct Distribution {
    bool feasible = false;
    std::vector<std::vector<int>> d;   // d[α] ⊆ indices, ascending
    std::vector<std::vector<int>> U;   // U[t] ⊆ instances, ascending
    /// s[t]; nullopt is ∞.
    std::vector<std::optional<int>> bound;
    bool strict = false;
    /// Infeasible runs: the instance that found no index with room.
    int unplaced = -1;
    std::string diagnostic;
};

Distribution build_distribution(const Scenario& sc, const GTable& g, std::uint64_t seed,
                                const DistributionOptions& options = {});

struct IndexRealization {
    int index = 0;
    std::vector<int> assigned;
    bool consistent = false;
    LeafStem witness;
    int failing_level = -1;
};

struct RealizationReport {
    std::vector<IndexRealization> per_index;
    int failures = 0;
};

RealizationReport verify_realization(const Scenario& sc, const Distribution& dist, int workers = 1);

struct ScenarioOptions {
    int index_count = 6;
    int instance_count = 4;
    int min_depth = 2;
    int max_depth = 8;
    /// Chance that an approximation is re-drawn from some level on.
    double perturb_prob = 0.5;
};

/// Limit tuples all compatible with one random leaf for x, so the limit
/// family is consistent by construction; approximations follow the limit
/// and, with perturb_prob, diverge from a random level.
Scenario random_scenario(const Template& t, std::uint64_t seed, const ScenarioOptions& options = {});

} // namespace htpl
