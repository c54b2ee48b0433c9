#include "brute_force.hpp"

#include <algorithm>
#include <map>

namespace htpl::oracle {

namespace {

std::set<std::vector<int>> edge_set(const Hypergraph& h) {
    const auto edges = h.uniform_edges();
    return {edges.begin(), edges.end()};
}

bool literal_edge_in(const std::set<std::vector<int>>& edges, int k, std::vector<int> tuple) {
    std::sort(tuple.begin(), tuple.end());
    tuple.erase(std::unique(tuple.begin(), tuple.end()), tuple.end());
    return static_cast<int>(tuple.size()) < k || edges.count(tuple) != 0;
}

// Odometer over digits with per-position bases; false once it wraps.
bool advance(std::vector<int>& digits, const std::vector<int>& bases) {
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
        if (++digits[i] < bases[i]) {
            return true;
        }
        digits[i] = 0;
    }
    return false;
}

} // namespace

bool literal_edge(const Hypergraph& h, const std::vector<int>& tuple) {
    return literal_edge_in(edge_set(h), h.arity(), tuple);
}

std::optional<int> witness(const Hypergraph& h, const std::vector<Tuple>& tuples) {
    const auto edges = edge_set(h);
    for (int s = 0; s < h.size(); ++s) {
        bool all = true;
        for (const auto& tup : tuples) {
            std::vector<int> e{s};
            e.insert(e.end(), tup.begin(), tup.end());
            all = all && literal_edge_in(edges, h.arity(), e);
        }
        if (all) {
            return s;
        }
    }
    return std::nullopt;
}

bool extension(const Hypergraph& h, int t) {
    const int r = h.arity() - 1;
    const auto edges = edge_set(h);
    std::vector<int> digits(static_cast<std::size_t>(t * r), 0);
    const std::vector<int> bases(digits.size(), h.size());
    do {
        bool found = false;
        for (int s = 0; s < h.size() && !found; ++s) {
            bool all = true;
            for (int i = 0; i < t && all; ++i) {
                std::vector<int> e{s};
                e.insert(e.end(), digits.begin() + i * r, digits.begin() + (i + 1) * r);
                all = literal_edge_in(edges, h.arity(), e);
            }
            found = all;
        }
        if (!found) {
            return false;
        }
    } while (advance(digits, bases));
    return true;
}

namespace {

std::optional<std::vector<int>> first_subset(const Hypergraph& h, int size, bool want_clique) {
    const auto edges = edge_set(h);
    const int k = h.arity();
    const int n = h.size();
    if (size > n) {
        return std::nullopt;
    }
    // Subsets of the requested size in lexicographic order.
    std::vector<int> c(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) {
        c[i] = i;
    }
    for (;;) {
        bool ok = true;
        // Every k-sequence from c: all index sequences with repetition.
        std::vector<int> pick(static_cast<std::size_t>(k), 0);
        const std::vector<int> bases(static_cast<std::size_t>(k), size);
        if (size > 0) {
            do {
                std::vector<int> e;
                for (int p : pick) {
                    e.push_back(c[p]);
                }
                std::vector<int> distinct = e;
                std::sort(distinct.begin(), distinct.end());
                distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
                const bool edge = literal_edge_in(edges, k, e);
                if (want_clique) {
                    ok = edge;
                } else if (static_cast<int>(distinct.size()) == k) {
                    ok = !edge;
                }
            } while (ok && advance(pick, bases));
        }
        if (ok) {
            return c;
        }
        int i = size - 1;
        while (i >= 0 && c[i] == n - size + i) {
            --i;
        }
        if (i < 0) {
            return std::nullopt;
        }
        ++c[i];
        for (int j = i + 1; j < size; ++j) {
            c[j] = c[j - 1] + 1;
        }
    }
}

} // namespace

std::optional<std::vector<int>> clique(const Hypergraph& h, int size) {
    return first_subset(h, size, true);
}

std::optional<std::vector<int>> independent(const Hypergraph& h, int size) {
    return first_subset(h, size, false);
}

int m_star(const Template& t, int count) {
    // Past the prefix f grows by at least one per level, so this horizon
    // reaches every level where f could still dip below count.
    const int horizon = t.prefix_depth() + count + 2;
    for (int n = 0; n < horizon; ++n) {
        bool ok = true;
        for (int q = n; q < horizon && ok; ++q) {
            ok = t.f(q) >= count;
        }
        if (ok) {
            return n;
        }
    }
    return horizon;
}

PositiveVerdict positive_type(const Template& t, const PositiveTypeSpec& spec, int depth) {
    const int k = t.arity();
    std::vector<std::set<std::vector<int>>> edges;
    std::vector<int> bases;
    for (int l = 0; l < depth; ++l) {
        edges.push_back(edge_set(t.level(l).graph));
        bases.push_back(t.level_size(l));
    }
    auto coord = [](const LeafStem& s, int l) {
        return l < static_cast<int>(s.length()) ? s[static_cast<std::size_t>(l)] : 0;
    };
    std::vector<int> x(static_cast<std::size_t>(depth), 0);
    do {
        bool ok = true;
        if (spec.x_stem) {
            for (int l = 0; l < depth && ok && l < static_cast<int>(spec.x_stem->length()); ++l) {
                ok = x[l] == (*spec.x_stem)[static_cast<std::size_t>(l)];
            }
        }
        for (const auto& tup : spec.params) {
            for (int l = 0; l < depth && ok; ++l) {
                std::vector<int> e{x[l]};
                for (const auto& s : tup) {
                    e.push_back(coord(s, l));
                }
                ok = literal_edge_in(edges[static_cast<std::size_t>(l)], k, e);
            }
        }
        if (ok) {
            return {true, LeafStem(x)};
        }
    } while (advance(x, bases));
    return {};
}

bool qf_formula(const Template& t, int m, const QfFormulaSpec& spec) {
    const int k = t.arity();
    // Elements: one per class (named by class label), plus x unless x is a
    // parameter.
    std::map<int, LeafStem> element_leaf;
    for (std::size_t i = 0; i < spec.params.size(); ++i) {
        auto [it, fresh] = element_leaf.emplace(spec.classes[i], spec.params[i]);
        if (!fresh && !(it->second == spec.params[i])) {
            return false;
        }
    }
    int x_id = -1;  // class labels are never negative here
    if (spec.x_equals) {
        x_id = spec.classes[static_cast<std::size_t>(*spec.x_equals)];
        if (!(element_leaf[x_id] == spec.x_leaf)) {
            return false;
        }
    } else {
        x_id = -1;
        while (element_leaf.count(x_id)) {
            --x_id;
        }
        element_leaf[x_id] = spec.x_leaf;
    }
    auto as_set = [&](const Tuple& tup) {
        std::vector<int> s{x_id};
        for (int i : tup) {
            s.push_back(spec.classes[static_cast<std::size_t>(i)]);
        }
        std::sort(s.begin(), s.end());
        return s;
    };
    std::set<std::vector<int>> pos;
    std::set<std::vector<int>> neg;
    for (const auto& tup : spec.positive) {
        auto s = as_set(tup);
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
            return false;  // R is irreflexive
        }
        pos.insert(s);
    }
    for (const auto& tup : spec.negative) {
        neg.insert(as_set(tup));
    }
    for (const auto& s : pos) {
        if (neg.count(s)) {
            return false;
        }
    }
    for (const auto& s : pos) {
        for (int l = 0; l < m; ++l) {
            std::vector<int> e;
            for (int id : s) {
                e.push_back(element_leaf[id][static_cast<std::size_t>(l)]);
            }
            if (!literal_edge_in(edge_set(t.level(l).graph), k, e)) {
                return false;
            }
        }
    }
    return true;
}

std::uint64_t edge_partners(const Template& t, const LeafStem& rho, int depth) {
    const int r = t.arity() - 1;
    std::vector<std::set<std::vector<int>>> edges;
    std::vector<int> bases;
    for (int i = 0; i < r; ++i) {
        for (int l = 0; l < depth; ++l) {
            bases.push_back(t.level_size(l));
        }
    }
    for (int l = 0; l < depth; ++l) {
        edges.push_back(edge_set(t.level(l).graph));
    }
    std::uint64_t count = 0;
    std::vector<int> digits(bases.size(), 0);
    do {
        bool ok = true;
        for (int l = 0; l < depth && ok; ++l) {
            std::vector<int> e{rho[static_cast<std::size_t>(l)]};
            for (int i = 0; i < r; ++i) {
                e.push_back(digits[static_cast<std::size_t>(i * depth + l)]);
            }
            ok = literal_edge_in(edges[static_cast<std::size_t>(l)], t.arity(), e);
        }
        count += ok ? 1 : 0;
    } while (!digits.empty() && advance(digits, bases));
    return count;
}

std::vector<Hypergraph> all_hypergraphs(int arity, int size) {
    std::vector<Tuple> subsets;
    std::vector<int> c(static_cast<std::size_t>(arity));
    if (size >= arity) {
        for (int i = 0; i < arity; ++i) {
            c[i] = i;
        }
        for (;;) {
            subsets.push_back(c);
            int i = arity - 1;
            while (i >= 0 && c[i] == size - arity + i) {
                --i;
            }
            if (i < 0) {
                break;
            }
            ++c[i];
            for (int j = i + 1; j < arity; ++j) {
                c[j] = c[j - 1] + 1;
            }
        }
    }
    std::vector<Hypergraph> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << subsets.size()); ++mask) {
        std::vector<Tuple> edges;
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            if ((mask >> i) & 1u) {
                edges.push_back(subsets[i]);
            }
        }
        out.emplace_back(arity, size, edges);
    }
    return out;
}

} // namespace htpl::oracle

namespace htpl::oracle {

Template tiny_template(std::uint64_t seed) {
    Rng rng = derived_rng(seed, 0x71);
    const int k = uniform_int(rng, 2, 3);
    const int depth = uniform_int(rng, 1, 4);
    std::vector<int> sizes;
    std::vector<int> target;
    for (int n = 0; n < depth; ++n) {
        sizes.push_back(uniform_int(rng, k, 4));
        target.push_back(uniform_int(rng, 1, sizes.back()));
    }
    const double probs[] = {0.3, 0.5, 0.7, 0.9};
    const double p = probs[uniform_below(rng, 4)];
    RandomTemplateOptions opt;
    opt.retry_budget = 4;
    return random_template(k, sizes, p, target, rng(), opt);
}

PositiveTypeSpec tiny_spec(const Template& t, Rng& rng) {
    auto random_stem = [&](int len) {
        std::vector<int> p;
        for (int l = 0; l < len; ++l) {
            p.push_back(uniform_int(rng, 0, t.level_size(l) - 1));
        }
        return LeafStem(std::move(p));
    };
    PositiveTypeSpec spec;
    const int len = uniform_int(rng, 1, t.prefix_depth());
    const int tuples = uniform_int(rng, 0, 3);
    for (int i = 0; i < tuples; ++i) {
        StemTuple tup;
        for (int j = 0; j < t.arity() - 1; ++j) {
            tup.push_back(random_stem(len));
        }
        spec.params.push_back(std::move(tup));
    }
    if (bernoulli(rng, 0.5)) {
        spec.x_stem = random_stem(uniform_int(rng, 1, len + 1));
    }
    return spec;
}

} // namespace htpl::oracle
