#include "htpl/template.hpp"

#include <algorithm>

#include "htpl/errors.hpp"
#include "htpl/rng.hpp"

namespace htpl {

Template::Template(int arity, std::vector<Level> prefix, TailPolicy tail)
    : arity_(arity), prefix_(std::move(prefix)), tail_(tail) {
    if (arity < 2 || arity > kMaxArity) {
        throw InputError("template arity must be in [2, " + std::to_string(kMaxArity) + "]");
    }
    if (prefix_.empty()) {
        throw InputError("a template needs at least one stored level");
    }
    if (tail_.growth < 1) {
        throw InputError("tail growth must be >= 1");
    }
    for (std::size_t n = 0; n < prefix_.size(); ++n) {
        if (prefix_[n].graph.arity() != arity) {
            throw InputError("level " + std::to_string(n) + " has arity " +
                             std::to_string(prefix_[n].graph.arity()) + ", template has " +
                             std::to_string(arity));
        }
    }
}

int Template::level_size(int n) const {
    if (n < 0) {
        throw InputError("level index must be >= 0");
    }
    if (n < prefix_depth()) {
        return prefix_[static_cast<std::size_t>(n)].graph.size();
    }
    const int last = prefix_depth() - 1;
    return prefix_.back().graph.size() + tail_.effective_growth() * (n - last);
}

int Template::f(int n) const {
    if (n < prefix_depth() && n >= 0) {
        return prefix_[static_cast<std::size_t>(n)].f;
    }
    return level_size(n);
}

Level Template::level(int n) const {
    if (n < 0) {
        throw InputError("level index must be >= 0");
    }
    if (n < prefix_depth()) {
        return prefix_[static_cast<std::size_t>(n)];
    }
    const int size = level_size(n);
    return Level{Hypergraph::complete(arity_, size), size};
}

bool Template::everywhere_complete() const {
    return std::all_of(prefix_.begin(), prefix_.end(),
                       [](const Level& l) { return l.graph.is_complete(); });
}

std::vector<Hypergraph> Template::graphs(int depth) const {
    std::vector<Hypergraph> out;
    out.reserve(static_cast<std::size_t>(std::max(depth, 0)));
    for (int n = 0; n < depth; ++n) {
        out.push_back(level(n).graph);
    }
    return out;
}

Template complete_template(int arity, int prefix_depth, int first_size, int growth) {
    if (prefix_depth < 1 || first_size < 1 || growth < 1) {
        throw InputError("complete_template needs prefix_depth, first_size, growth >= 1");
    }
    std::vector<Level> levels;
    for (int n = 0; n < prefix_depth; ++n) {
        const int size = first_size + growth * n;
        levels.push_back({Hypergraph::complete(arity, size), size});
    }
    return Template(arity, std::move(levels), TailPolicy{TailKind::complete_growing, growth});
}

std::string to_string(Condition c) {
    switch (c) {
    case Condition::arity:
        return "arity";
    case Condition::f_positive:
        return "f_positive";
    case Condition::f_bound:
        return "f_bound";
    case Condition::extension:
        return "extension";
    }
    return "unknown";
}

ValidationReport validate(const Template& t, int depth, const ExtensionOptions& options) {
    if (depth < 1) {
        throw InputError("validation depth must be >= 1");
    }
    ValidationReport report;
    report.depth = depth;
    const int stored = std::min(depth, t.prefix_depth());
    for (int n = 0; n < stored; ++n) {
        const Level& lv = t.prefix()[static_cast<std::size_t>(n)];
        if (lv.graph.arity() != t.arity()) {
            report.issues.push_back({n, Condition::arity, "level arity differs from template", {}});
            continue;
        }
        if (lv.f < 1) {
            report.issues.push_back({n, Condition::f_positive,
                                     "f(" + std::to_string(n) + ") = " + std::to_string(lv.f) +
                                         " is not positive",
                                     {}});
            continue;
        }
        if (lv.f > lv.graph.size()) {
            report.issues.push_back({n, Condition::f_bound,
                                     "f(" + std::to_string(n) + ") = " + std::to_string(lv.f) +
                                         " exceeds H_n = " + std::to_string(lv.graph.size()),
                                     {}});
            continue;
        }
        ExtensionOptions opt = options;
        opt.seed = options.seed + static_cast<std::uint64_t>(n);
        const auto ext = check_extension_property(lv.graph, lv.f, opt);
        report.exhaustive = report.exhaustive && ext.exhaustive;
        if (!ext.holds) {
            report.issues.push_back({n, Condition::extension,
                                     "no common witness for " + std::to_string(lv.f) + " tuples",
                                     ext.counterexample});
        }
    }
    report.valid = report.issues.empty();
    return report;
}

int max_extension_arity(const Hypergraph& h, int cap) {
    if (cap < 1) {
        throw InputError("cap must be >= 1");
    }
    int best = 0;
    for (int t = 1; t <= cap; ++t) {
        if (!has_extension_property(h, t)) {
            break;
        }
        best = t;
    }
    return best;
}

Template random_template(int arity, std::span<const int> level_sizes, double edge_prob,
                         std::span<const int> target_f, std::uint64_t seed,
                         const RandomTemplateOptions& options) {
    if (level_sizes.size() != target_f.size()) {
        throw InputError("level_sizes and target_f must have equal length");
    }
    if (level_sizes.empty()) {
        throw InputError("random_template needs at least one level");
    }
    if (!(edge_prob > 0.0 && edge_prob <= 1.0)) {
        throw InputError("edge_prob must lie in (0, 1]");
    }
    for (std::size_t n = 0; n < level_sizes.size(); ++n) {
        if (level_sizes[n] < arity) {
            throw InputError("level sizes must be >= k");
        }
        if (target_f[n] < 1) {
            throw InputError("target f values must be >= 1");
        }
    }

    std::vector<Level> levels;
    for (std::size_t n = 0; n < level_sizes.size(); ++n) {
        const int size = level_sizes[n];
        const int target = std::min(target_f[n], size);
        Rng rng = derived_rng(seed, n);
        std::optional<Hypergraph> accepted;
        Hypergraph sample(arity, size);
        for (int attempt = 0; attempt <= options.retry_budget; ++attempt) {
            if (edge_prob >= 1.0) {
                sample = Hypergraph::complete(arity, size);
            } else {
                sample = Hypergraph(arity, size);
                std::vector<int> c(static_cast<std::size_t>(arity));
                for (int i = 0; i < arity; ++i) {
                    c[i] = i;
                }
                for (;;) {
                    if (bernoulli(rng, edge_prob)) {
                        sample.set_uniform_edge(c, true);
                    }
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
            if (has_extension_property(sample, target)) {
                accepted = sample;
                break;
            }
        }
        if (accepted) {
            levels.push_back({std::move(*accepted), target});
            continue;
        }
        const int degraded = max_extension_arity(sample, target);
        if (degraded == 0) {
            throw GenerationError("level " + std::to_string(n) +
                                  ": no Extension arity survives the retry budget");
        }
        levels.push_back({std::move(sample), degraded});
    }
    return Template(arity, std::move(levels), options.tail);
}

} // namespace htpl
