#pragma once

// Template and model generators shared by the unit and acceptance suites.

#include <cstdint>
#include <optional>
#include <vector>

#include "htpl/rng.hpp"
#include "htpl/template.hpp"
#include "htpl/theory.hpp"
#include "htpl/typecheck.hpp"

namespace htpl::fixtures {

/// Random template with `depth` stored levels of size in [lo, hi], edge
/// probability p, random targets in [1, 3], and the last level's target at
/// least `tail_f` so that m_star(tail_f) stays inside the prefix. Redraws
/// until validate() passes and prefix_depth > m_star(t, tail_f).
inline Template validated_template(int k, int depth, int lo, int hi, double p, int tail_f, std::uint64_t seed) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng = derived_rng(seed, attempt);
        std::vector<int> sizes;
        std::vector<int> target;
        for (int n = 0; n < depth; ++n) {
            sizes.push_back(uniform_int(rng, lo, hi));
            target.push_back(uniform_int(rng, 1, 3));
        }
        target.back() = std::max(target.back(), tail_f);
        const Template t = random_template(k, sizes, p, target, rng());
        if (validate(t, depth).valid && m_star(t, tail_f) + 1 <= t.prefix_depth()) {
            return t;
        }
    }
}

/// Copy of `t` where `level`'s graph loses random edges until Extension at
/// arity `arity` fails; f values are kept, so the template now overstates
/// its Extension arity there. Returns nullopt if even the edgeless graph
/// satisfies Extension at that arity.
inline std::optional<Template> corrupt_level(const Template& t, int level, int arity, std::uint64_t seed) {
    Rng rng = derived_rng(seed, 0xc0);
    std::vector<Level> levels = t.prefix();
    Hypergraph h = levels[static_cast<std::size_t>(level)].graph;
    auto edges = h.uniform_edges();
    shuffle_in_place(edges, rng);
    for (const auto& e : edges) {
        if (!check_extension_property(h, arity).holds) {
            break;
        }
        h.set_uniform_edge(e, false);
    }
    if (check_extension_property(h, arity).holds) {
        return std::nullopt;
    }
    levels[static_cast<std::size_t>(level)].graph = h;
    return Template(t.arity(), levels, t.tail());
}

/// M0 followed by `extra` new elements on random level-m leaves; new
/// k-subsets touching them become edges with probability p when allowed.
/// The embedding of M0 is the identity on its indices.
inline FiniteModel random_extension(const Template& t, const FiniteModel& m0, int extra, double p,
                                    Rng& rng) {
    FiniteModel out = m0;
    const auto stems = all_stems(t, m0.level);
    const int old = static_cast<int>(m0.size());
    for (int i = 0; i < extra; ++i) {
        out.leaves.push_back(stems[uniform_below(rng, stems.size())]);
    }
    const int n = static_cast<int>(out.size());
    const int k = t.arity();
    Tuple c(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        c[i] = i;
    }
    if (n < k) {
        return out;
    }
    for (;;) {
        if (c.back() >= old) {
            bool allowed = true;
            Tuple coords(c.size());
            for (int l = 0; l < m0.level && allowed; ++l) {
                for (std::size_t j = 0; j < c.size(); ++j) {
                    coords[j] = out.leaves[static_cast<std::size_t>(c[j])][static_cast<std::size_t>(l)];
                }
                allowed = t.level(l).graph.is_edge(coords);
            }
            if (allowed && bernoulli(rng, p)) {
                out.edges.insert(c);
            }
        }
        int i = k - 1;
        while (i >= 0 && c[i] == n - k + i) {
            --i;
        }
        if (i < 0) {
            return out;
        }
        ++c[i];
        for (int j = i + 1; j < k; ++j) {
            c[j] = c[j - 1] + 1;
        }
    }
}

inline std::vector<int> identity_map(std::size_t n) {
    std::vector<int> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = static_cast<int>(i);
    }
    return v;
}

} // namespace htpl::fixtures
