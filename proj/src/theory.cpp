#include "htpl/theory.hpp"

#include <algorithm>
#include <map>

#include "htpl/errors.hpp"
#include "htpl/rng.hpp"
#include "htpl/typecheck.hpp"

namespace htpl {

bool holds_Q(const FiniteModel& model, int element, const LeafStem& eta) {
    if (element < 0 || element >= static_cast<int>(model.size())) {
        throw InputError("element index out of range");
    }
    if (static_cast<int>(eta.length()) > model.level) {
        throw InputError("predicate stem is longer than the model level");
    }
    return eta.is_prefix_of(model.leaves[static_cast<std::size_t>(element)]);
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::arity_mismatch:
        return "arity_mismatch";
    case ViolationKind::malformed_leaf:
        return "malformed_leaf";
    case ViolationKind::bad_edge_shape:
        return "bad_edge_shape";
    case ViolationKind::forbidden_edge:
        return "forbidden_edge";
    }
    return "unknown";
}

namespace {

// First level below m at which the leaves of `edge` are not an edge, or -1.
int first_forbidden_level(const Template& t, int m, const std::vector<LeafStem>& leaves,
                          const Tuple& edge) {
    Tuple coords(edge.size());
    for (int l = 0; l < m; ++l) {
        for (std::size_t i = 0; i < edge.size(); ++i) {
            coords[i] = leaves[static_cast<std::size_t>(edge[i])][static_cast<std::size_t>(l)];
        }
        if (!t.level(l).graph.is_edge(coords)) {
            return l;
        }
    }
    return -1;
}

bool allowed_leaves(const std::vector<const LeafStem*>& stems, const std::vector<Hypergraph>& graphs) {
    Tuple coords(stems.size());
    for (std::size_t l = 0; l < graphs.size(); ++l) {
        for (std::size_t i = 0; i < stems.size(); ++i) {
            coords[i] = (*stems[i])[l];
        }
        if (!graphs[l].is_edge(coords)) {
            return false;
        }
    }
    return true;
}

// Calls fn on every increasing tuple of length len over 0..n-1, in
// lexicographic order.
template <typename Fn>
void for_each_subset(int n, int len, Fn&& fn) {
    if (len > n || len < 0) {
        return;
    }
    Tuple c(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
        c[i] = i;
    }
    for (;;) {
        fn(static_cast<const Tuple&>(c));
        int i = len - 1;
        while (i >= 0 && c[i] == n - len + i) {
            --i;
        }
        if (i < 0) {
            return;
        }
        ++c[i];
        for (int j = i + 1; j < len; ++j) {
            c[j] = c[j - 1] + 1;
        }
    }
}

} // namespace

ViolationReport check_model(const Template& t, const FiniteModel& model) {
    ViolationReport report;
    if (model.arity != t.arity()) {
        report.violations.push_back({ViolationKind::arity_mismatch, -1, {}, -1,
                                     "model arity " + std::to_string(model.arity) +
                                         ", template arity " + std::to_string(t.arity())});
        return report;
    }
    const int n = static_cast<int>(model.size());
    std::vector<bool> good_leaf(static_cast<std::size_t>(n), true);
    for (int i = 0; i < n; ++i) {
        const auto& leaf = model.leaves[static_cast<std::size_t>(i)];
        if (static_cast<int>(leaf.length()) != model.level || !in_tree(t, leaf)) {
            good_leaf[static_cast<std::size_t>(i)] = false;
            report.violations.push_back({ViolationKind::malformed_leaf, i, {}, -1,
                                         "leaf must be a tree stem of length " +
                                             std::to_string(model.level)});
        }
    }
    for (const auto& edge : model.edges) {
        bool shape = static_cast<int>(edge.size()) == model.arity;
        for (std::size_t i = 0; shape && i < edge.size(); ++i) {
            shape = edge[i] >= 0 && edge[i] < n && (i == 0 || edge[i - 1] < edge[i]);
        }
        if (!shape) {
            report.violations.push_back({ViolationKind::bad_edge_shape, -1, edge, -1,
                                         "edges must be k distinct element indices"});
            continue;
        }
        if (!std::all_of(edge.begin(), edge.end(),
                         [&](int e) { return good_leaf[static_cast<std::size_t>(e)]; })) {
            continue;
        }
        const int l = first_forbidden_level(t, model.level, model.leaves, edge);
        if (l >= 0) {
            report.violations.push_back({ViolationKind::forbidden_edge, -1, edge, l,
                                         "leaf coordinates are a non-edge of level " +
                                             std::to_string(l)});
        }
    }
    return report;
}

FiniteModel restrict_level(const FiniteModel& model, int level) {
    if (level < 0 || level > model.level) {
        throw InputError("restriction level must lie in [0, model level]");
    }
    FiniteModel out = model;
    out.level = level;
    for (auto& leaf : out.leaves) {
        leaf = leaf.prefix(static_cast<std::size_t>(level));
    }
    return out;
}

namespace {

void require_valid(const Template& t, int m, const FiniteModel& model, const char* name) {
    if (model.level != m) {
        throw InputError(std::string(name) + " is not at level " + std::to_string(m));
    }
    const auto report = check_model(t, model);
    if (!report.ok()) {
        throw InputError(std::string(name) + " violates the level theory: " +
                         report.violations.front().detail);
    }
}

void require_embedding(const FiniteModel& m0, const FiniteModel& target, const std::vector<int>& emb,
                       const char* name) {
    if (emb.size() != m0.size()) {
        throw InputError(std::string(name) + " must map every element of M0");
    }
    std::vector<int> inverse(target.size(), -1);
    for (std::size_t i = 0; i < emb.size(); ++i) {
        const int e = emb[i];
        if (e < 0 || e >= static_cast<int>(target.size())) {
            throw InputError(std::string(name) + " maps outside its target");
        }
        if (inverse[static_cast<std::size_t>(e)] >= 0) {
            throw InputError(std::string(name) + " is not injective");
        }
        inverse[static_cast<std::size_t>(e)] = static_cast<int>(i);
        if (!(m0.leaves[i] == target.leaves[static_cast<std::size_t>(e)])) {
            throw InputError(std::string(name) + " does not preserve leaves");
        }
    }
    for (const auto& edge : m0.edges) {
        Tuple img;
        for (int v : edge) {
            img.push_back(emb[static_cast<std::size_t>(v)]);
        }
        std::sort(img.begin(), img.end());
        if (target.edges.count(img) == 0) {
            throw InputError(std::string(name) + " does not preserve an edge");
        }
    }
    // Induced: an edge of the target inside the image must come from M0.
    for (const auto& edge : target.edges) {
        Tuple pre;
        for (int v : edge) {
            const int p = inverse[static_cast<std::size_t>(v)];
            if (p < 0) {
                break;
            }
            pre.push_back(p);
        }
        if (pre.size() == edge.size()) {
            std::sort(pre.begin(), pre.end());
            if (m0.edges.count(pre) == 0) {
                throw InputError(std::string(name) + " image is not an induced substructure");
            }
        }
    }
}

} // namespace

FiniteModel amalgamate(const Template& t, int m, const FiniteModel& m0, const FiniteModel& m1,
                       const FiniteModel& m2, const std::vector<int>& emb1,
                       const std::vector<int>& emb2) {
    require_valid(t, m, m0, "M0");
    require_valid(t, m, m1, "M1");
    require_valid(t, m, m2, "M2");
    require_embedding(m0, m1, emb1, "first embedding");
    require_embedding(m0, m2, emb2, "second embedding");

    FiniteModel out = m1;
    std::vector<int> place(m2.size(), -1);
    for (std::size_t i = 0; i < emb2.size(); ++i) {
        place[static_cast<std::size_t>(emb2[i])] = emb1[i];
    }
    for (std::size_t e = 0; e < m2.size(); ++e) {
        if (place[e] < 0) {
            place[e] = static_cast<int>(out.leaves.size());
            out.leaves.push_back(m2.leaves[e]);
        }
    }
    for (const auto& edge : m2.edges) {
        Tuple img;
        for (int v : edge) {
            img.push_back(place[static_cast<std::size_t>(v)]);
        }
        std::sort(img.begin(), img.end());
        out.edges.insert(std::move(img));
    }
    return out;
}

FiniteModel build_random_model(const Template& t, int m, int count_per_leaf, double edge_prob,
                               std::uint64_t seed) {
    if (m < 0 || m > t.prefix_depth()) {
        throw InputError("model level must lie in [0, prefix depth]");
    }
    if (count_per_leaf < 0) {
        throw InputError("count_per_leaf must be >= 0");
    }
    FiniteModel model;
    model.arity = t.arity();
    model.level = m;
    for (const auto& stem : all_stems(t, m)) {
        for (int c = 0; c < count_per_leaf; ++c) {
            model.leaves.push_back(stem);
        }
    }
    if (edge_prob <= 0.0) {
        return model;
    }
    Rng rng = derived_rng(seed, 0);
    for_each_subset(static_cast<int>(model.size()), t.arity(), [&](const Tuple& s) {
        if (first_forbidden_level(t, m, model.leaves, s) < 0 && bernoulli(rng, edge_prob)) {
            model.edges.insert(s);
        }
    });
    return model;
}

namespace {

struct ClosureContext {
    const Template& t;
    int k;
    int m;
    int s;
    std::vector<Hypergraph> graphs;
    std::vector<LeafStem> stems;
};

// Which (k-1)-subsets of the parameter set (as positions into `params`) form
// an edge together with b.
std::uint32_t pattern_of(const FiniteModel& model, int b, const std::vector<int>& params,
                         const std::vector<Tuple>& slots) {
    std::uint32_t mask = 0;
    Tuple edge;
    for (std::size_t j = 0; j < slots.size(); ++j) {
        edge.assign(1, b);
        for (int p : slots[j]) {
            edge.push_back(params[static_cast<std::size_t>(p)]);
        }
        std::sort(edge.begin(), edge.end());
        if (model.edges.count(edge) != 0) {
            mask |= 1u << j;
        }
    }
    return mask;
}

bool is_realized(const FiniteModel& model, const std::vector<int>& params, const LeafStem& eta,
                 const std::vector<Tuple>& slots, std::uint32_t mask) {
    for (int b = 0; b < static_cast<int>(model.size()); ++b) {
        if (!(model.leaves[static_cast<std::size_t>(b)] == eta) ||
            std::find(params.begin(), params.end(), b) != params.end()) {
            continue;
        }
        if (pattern_of(model, b, params, slots) == mask) {
            return true;
        }
    }
    return false;
}

// Visits every consistent but unrealized formula; fn returns false to stop.
template <typename Fn>
void scan_unrealized(const ClosureContext& ctx, const FiniteModel& model, Fn&& fn) {
    const int n = static_cast<int>(model.size());
    bool go = true;
    for (int size = 0; size <= ctx.s && go; ++size) {
        const auto slots = increasing_tuples(size, ctx.k - 1);
        for_each_subset(n, size, [&](const Tuple& params) {
            if (!go) {
                return;
            }
            std::vector<LeafStem> param_leaves;
            for (int p : params) {
                param_leaves.push_back(model.leaves[static_cast<std::size_t>(p)]);
            }
            for (const auto& eta : ctx.stems) {
                if (!go) {
                    return;
                }
                std::vector<bool> seen(std::size_t{1} << slots.size(), false);
                for (int b = 0; b < n; ++b) {
                    if (model.leaves[static_cast<std::size_t>(b)] == eta &&
                        std::find(params.begin(), params.end(), b) == params.end()) {
                        seen[pattern_of(model, b, params, slots)] = true;
                    }
                }
                for (std::uint32_t mask = 0; mask < seen.size() && go; ++mask) {
                    if (seen[mask]) {
                        continue;
                    }
                    std::vector<Tuple> positive;
                    for (std::size_t j = 0; j < slots.size(); ++j) {
                        if ((mask >> j) & 1u) {
                            positive.push_back(slots[j]);
                        }
                    }
                    const auto spec = make_qf_spec(param_leaves, eta, positive, ctx.k);
                    if (decide_qf_formula(ctx.t, ctx.m, spec, false)) {
                        go = fn(params, eta, slots, mask, positive);
                    }
                }
            }
        });
    }
}

ClosureContext make_context(const Template& t, const FiniteModel& model, int s) {
    if (s < 1) {
        throw InputError("parameter bound s must be >= 1");
    }
    const auto report = check_model(t, model);
    if (!report.ok()) {
        throw InputError("model violates the level theory: " + report.violations.front().detail);
    }
    if (increasing_tuples(s, t.arity() - 1).size() > 16) {
        throw InputError("too many parameter tuples for s; need C(s, k-1) <= 16");
    }
    return ClosureContext{t, t.arity(), model.level, s, t.graphs(model.level),
                          all_stems(t, model.level)};
}

} // namespace

std::vector<UnrealizedFormula> unrealized_formulas(const Template& t, const FiniteModel& model,
                                                   int s, std::size_t limit) {
    const auto ctx = make_context(t, model, s);
    std::vector<UnrealizedFormula> out;
    if (limit == 0) {
        return out;
    }
    scan_unrealized(ctx, model,
                    [&](const Tuple& params, const LeafStem& eta, const std::vector<Tuple>&,
                        std::uint32_t, const std::vector<Tuple>& positive) {
                        out.push_back({params, eta, positive});
                        return out.size() < limit;
                    });
    return out;
}

ClosureReport close_existentially(const Template& t, const FiniteModel& model, int s,
                                  std::uint64_t element_budget, std::uint64_t seed) {
    const auto ctx = make_context(t, model, s);
    ClosureReport report;
    report.model = model;
    FiniteModel& cur = report.model;
    Rng rng = derived_rng(seed, 1);

    struct Pending {
        Tuple params;
        LeafStem eta;
        std::vector<Tuple> slots;
        std::uint32_t mask;
    };

    for (;;) {
        ++report.passes;
        std::vector<Pending> pending;
        scan_unrealized(ctx, cur,
                        [&](const Tuple& params, const LeafStem& eta, const std::vector<Tuple>& slots,
                            std::uint32_t mask, const std::vector<Tuple>&) {
                            pending.push_back({params, eta, slots, mask});
                            return true;
                        });
        if (pending.empty()) {
            report.fixpoint = true;
            return report;
        }
        for (const auto& p : pending) {
            // An earlier witness of this pass may already realize it.
            if (is_realized(cur, p.params, p.eta, p.slots, p.mask)) {
                continue;
            }
            if (report.added >= element_budget) {
                return report;
            }
            const int b = static_cast<int>(cur.size());
            cur.leaves.push_back(p.eta);
            std::vector<const LeafStem*> stems(static_cast<std::size_t>(ctx.k));
            for_each_subset(b, ctx.k - 1, [&](const Tuple& sigma) {
                Tuple edge = sigma;
                edge.push_back(b);
                bool inside = true;
                Tuple positions;
                for (int v : sigma) {
                    const auto it = std::find(p.params.begin(), p.params.end(), v);
                    if (it == p.params.end()) {
                        inside = false;
                        break;
                    }
                    positions.push_back(static_cast<int>(it - p.params.begin()));
                }
                if (inside) {
                    const auto slot = std::find(p.slots.begin(), p.slots.end(), positions);
                    const auto j = static_cast<std::size_t>(slot - p.slots.begin());
                    if ((p.mask >> j) & 1u) {
                        cur.edges.insert(std::move(edge));
                    }
                    return;
                }
                for (std::size_t i = 0; i < edge.size(); ++i) {
                    stems[i] = &cur.leaves[static_cast<std::size_t>(edge[i])];
                }
                if (allowed_leaves(stems, ctx.graphs) && bernoulli(rng, 0.5)) {
                    cur.edges.insert(std::move(edge));
                }
            });
            ++report.added;
        }
    }
}

} // namespace htpl
