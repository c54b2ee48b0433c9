#include "htpl/satsim.hpp"

#include <algorithm>
#include <limits>

#include "htpl/errors.hpp"
#include "htpl/parallel.hpp"
#include "htpl/rng.hpp"
#include "htpl/signature.hpp"
#include "htpl/typecheck.hpp"

namespace htpl {

namespace {

void check_tuple(const Template& t, const StemTuple& tup, std::size_t min_len, const char* what) {
    if (static_cast<int>(tup.size()) != t.arity() - 1) {
        throw InputError(std::string(what) + " tuples need k-1 stems");
    }
    for (const auto& s : tup) {
        if (s.length() < min_len || !in_tree(t, s)) {
            throw InputError(std::string(what) + " stem must be a tree stem of length >= " +
                             std::to_string(min_len));
        }
    }
}

} // namespace

void check_scenario(const Scenario& sc) {
    if (sc.depths.empty()) {
        throw InputError("scenario needs at least one index");
    }
    int max_depth = 0;
    for (int d : sc.depths) {
        if (d < 0) {
            throw InputError("index depths must be >= 0");
        }
        max_depth = std::max(max_depth, d);
    }
    PositiveTypeSpec limit;
    for (const auto& inst : sc.instances) {
        check_tuple(sc.tmpl, inst.limit, static_cast<std::size_t>(max_depth), "limit");
        for (std::size_t i = 1; i < inst.limit.size(); ++i) {
            if (inst.limit[i].length() != inst.limit[0].length()) {
                throw InputError("limit stems of one instance must share a length");
            }
        }
        if (inst.per_index.size() != sc.depths.size()) {
            throw InputError("every instance needs one approximation per index");
        }
        for (std::size_t t = 0; t < sc.depths.size(); ++t) {
            check_tuple(sc.tmpl, inst.per_index[t], static_cast<std::size_t>(sc.depths[t]), "approximation");
            for (const auto& s : inst.per_index[t]) {
                if (static_cast<int>(s.length()) != sc.depths[t]) {
                    throw InputError("approximation stems must have length i_t");
                }
            }
        }
        limit.params.push_back(inst.limit);
    }
    if (!limit.params.empty()) {
        std::size_t len = limit.params.front().front().length();
        for (auto& tup : limit.params) {
            for (auto& s : tup) {
                len = std::max(len, s.length());
            }
        }
        for (auto& tup : limit.params) {
            for (auto& s : tup) {
                s = s.zero_extended(len);
            }
        }
        if (!decide_positive_type(sc.tmpl, limit).consistent) {
            throw InputError("the limit family of the scenario is inconsistent");
        }
    }
}

int agreement_level(const Scenario& sc, int alpha, int t) {
    if (alpha < 0 || alpha >= sc.instance_count() || t < 0 || t >= sc.index_count()) {
        throw InputError("instance or index out of range");
    }
    const auto& inst = sc.instances[static_cast<std::size_t>(alpha)];
    const int depth = sc.depths[static_cast<std::size_t>(t)];
    const auto limit = f_signature(sc.tmpl, distinct_params(inst.limit), depth);
    const auto approx = f_signature(sc.tmpl, distinct_params(inst.per_index[static_cast<std::size_t>(t)]), depth);
    int n = 0;
    while (n < depth && limit.values[static_cast<std::size_t>(n)] == approx.values[static_cast<std::size_t>(n)]) {
        ++n;
    }
    return n;
}

GTable g_table_analytic(const Template& t, int size) {
    GTable g(static_cast<std::size_t>(std::max(size, 0)));
    if (t.everywhere_complete()) {
        return g;
    }
    for (int n = 0; n < size; ++n) {
        g[static_cast<std::size_t>(n)] = G_analytic(t, static_cast<std::uint64_t>(n));
    }
    return g;
}

std::optional<int> capacity(const Scenario& sc, int alpha, int t, const GTable& g) {
    const int n = agreement_level(sc, alpha, t);
    if (n >= static_cast<int>(g.size())) {
        throw InputError("G table has " + std::to_string(g.size()) +
                         " entries but n(alpha,t) = " + std::to_string(n));
    }
    return g[static_cast<std::size_t>(n)];
}

namespace {

bool fits(const std::optional<int>& bound, std::size_t load) {
    return !bound || static_cast<long>(load) < *bound;
}

bool at_most(const std::optional<int>& a, const std::optional<int>& b) {
    if (!b) {
        return true;
    }
    return a && *a <= *b;
}

} // namespace

Distribution build_distribution(const Scenario& sc, const GTable& g, std::uint64_t seed,
                                const DistributionOptions& options) {
    const int N = sc.index_count();
    const int L = sc.instance_count();
    Distribution dist;
    dist.strict = options.strict;
    dist.d.assign(static_cast<std::size_t>(L), {});
    dist.U.assign(static_cast<std::size_t>(N), {});

    std::vector<std::vector<std::optional<int>>> cap(static_cast<std::size_t>(L));
    for (int a = 0; a < L; ++a) {
        for (int t = 0; t < N; ++t) {
            cap[static_cast<std::size_t>(a)].push_back(capacity(sc, a, t, g));
        }
    }
    for (int t = 0; t < N; ++t) {
        std::optional<int> lo;
        for (int a = 0; a < L; ++a) {
            const auto& c = cap[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)];
            if (c && (!lo || *c < *lo)) {
                lo = c;
            }
        }
        if (lo) {
            lo = std::max(1, options.strict ? *lo - 1 : *lo);
        }
        dist.bound.push_back(lo);
    }

    auto eligible = [&](int a, int t) {
        return at_most(dist.bound[static_cast<std::size_t>(t)],
                       cap[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)]);
    };
    // Least-loaded index with room that a does not hold yet; ties go to the
    // smaller index.
    auto pick = [&](int a) {
        int best = -1;
        for (int t = 0; t < N; ++t) {
            const auto& held = dist.d[static_cast<std::size_t>(a)];
            if (!eligible(a, t) || !fits(dist.bound[static_cast<std::size_t>(t)], dist.U[static_cast<std::size_t>(t)].size()) ||
                std::find(held.begin(), held.end(), t) != held.end()) {
                continue;
            }
            if (best < 0 || dist.U[static_cast<std::size_t>(t)].size() < dist.U[static_cast<std::size_t>(best)].size()) {
                best = t;
            }
        }
        return best;
    };
    auto assign = [&](int a, int t) {
        dist.d[static_cast<std::size_t>(a)].push_back(t);
        dist.U[static_cast<std::size_t>(t)].push_back(a);
    };

    std::vector<int> order(static_cast<std::size_t>(L));
    for (int a = 0; a < L; ++a) {
        order[static_cast<std::size_t>(a)] = a;
    }
    Rng rng = derived_rng(seed, 0);
    shuffle_in_place(order, rng);

    for (int a : order) {
        const int t = pick(a);
        if (t < 0) {
            dist.feasible = false;
            dist.unplaced = a;
            long room = 0;
            bool unbounded = false;
            for (int u = 0; u < N; ++u) {
                if (dist.bound[static_cast<std::size_t>(u)]) {
                    room += *dist.bound[static_cast<std::size_t>(u)];
                } else {
                    unbounded = true;
                }
            }
            dist.diagnostic = "instance " + std::to_string(a) + " has no index with room; " +
                              std::to_string(L) + " instances against total capacity " +
                              (unbounded ? std::string("inf") : std::to_string(room));
            for (auto& v : dist.d) {
                std::sort(v.begin(), v.end());
            }
            for (auto& v : dist.U) {
                std::sort(v.begin(), v.end());
            }
            return dist;
        }
        assign(a, t);
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (int a : order) {
            if (options.max_per_instance > 0 &&
                static_cast<int>(dist.d[static_cast<std::size_t>(a)].size()) >= options.max_per_instance) {
                continue;
            }
            const int t = pick(a);
            if (t >= 0) {
                assign(a, t);
                changed = true;
            }
        }
    }
    for (auto& v : dist.d) {
        std::sort(v.begin(), v.end());
    }
    for (auto& v : dist.U) {
        std::sort(v.begin(), v.end());
    }
    dist.feasible = true;
    return dist;
}

RealizationReport verify_realization(const Scenario& sc, const Distribution& dist, int workers) {
    if (!dist.feasible) {
        throw InputError("cannot verify an infeasible distribution");
    }
    if (static_cast<int>(dist.U.size()) != sc.index_count()) {
        throw InputError("distribution does not match the scenario's index count");
    }
    RealizationReport report;
    report.per_index.resize(dist.U.size());
    parallel_for(dist.U.size(), workers, [&](std::size_t t) {
        IndexRealization r;
        r.index = static_cast<int>(t);
        r.assigned = dist.U[t];
        PositiveTypeSpec spec;
        for (int a : dist.U[t]) {
            if (a < 0 || a >= sc.instance_count()) {
                throw InputError("distribution names an instance that does not exist");
            }
            spec.params.push_back(sc.instances[static_cast<std::size_t>(a)].per_index[t]);
        }
        const auto dec = decide_positive_type(sc.tmpl, spec);
        r.consistent = dec.consistent;
        r.witness = dec.witness;
        r.failing_level = dec.failing_level;
        report.per_index[t] = std::move(r);
    });
    for (const auto& r : report.per_index) {
        report.failures += r.consistent ? 0 : 1;
    }
    return report;
}

Scenario random_scenario(const Template& t, std::uint64_t seed, const ScenarioOptions& options) {
    if (options.index_count < 1 || options.instance_count < 0 || options.min_depth < 0 ||
        options.max_depth < options.min_depth) {
        throw InputError("scenario options out of range");
    }
    const int k = t.arity();
    Rng rng = derived_rng(seed, 0);
    Scenario sc{t, {}, {}};
    for (int i = 0; i < options.index_count; ++i) {
        sc.depths.push_back(uniform_int(rng, options.min_depth, options.max_depth));
    }
    const int len = *std::max_element(sc.depths.begin(), sc.depths.end());
    const auto graphs = t.graphs(len);

    std::vector<int> x(static_cast<std::size_t>(len));
    for (int l = 0; l < len; ++l) {
        x[l] = uniform_int(rng, 0, t.level_size(l) - 1);
    }
    for (int a = 0; a < options.instance_count; ++a) {
        std::vector<std::vector<int>> paths(static_cast<std::size_t>(k - 1), std::vector<int>(static_cast<std::size_t>(len)));
        Tuple edge(static_cast<std::size_t>(k));
        for (int l = 0; l < len; ++l) {
            const int size = t.level_size(l);
            edge[0] = x[l];
            bool found = false;
            for (int tries = 0; tries < 64 && !found; ++tries) {
                for (int j = 1; j < k; ++j) {
                    edge[j] = uniform_int(rng, 0, size - 1);
                }
                found = graphs[l].is_edge(edge);
            }
            for (int j = 1; j < k; ++j) {
                paths[j - 1][l] = found ? edge[j] : x[l];
            }
        }
        Instance inst;
        for (auto& p : paths) {
            inst.limit.push_back(LeafStem(std::move(p)));
        }
        for (int i = 0; i < options.index_count; ++i) {
            const int d = sc.depths[static_cast<std::size_t>(i)];
            StemTuple approx;
            for (const auto& s : inst.limit) {
                approx.push_back(s.prefix(static_cast<std::size_t>(d)));
            }
            if (d > 0 && bernoulli(rng, options.perturb_prob)) {
                const int from = uniform_int(rng, 0, d - 1);
                for (auto& s : approx) {
                    std::vector<int> p = s.path();
                    for (int l = from; l < d; ++l) {
                        p[l] = uniform_int(rng, 0, t.level_size(l) - 1);
                    }
                    s = LeafStem(std::move(p));
                }
            }
            inst.per_index.push_back(std::move(approx));
        }
        sc.instances.push_back(std::move(inst));
    }
    return sc;
}

} // namespace htpl
