#include "htpl/typecheck.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "htpl/errors.hpp"
#include "htpl/parallel.hpp"
#include "htpl/rng.hpp"

namespace htpl {

int m_star(const Template& t, int count) {
    if (count < 1) {
        throw InputError("m_star needs count >= 1");
    }
    const int p = t.prefix_depth();
    const int g = t.tail().effective_growth();
    // Tail f is H_n, strictly increasing from level p.
    const int fp = t.f(p);
    int first_tail = p;
    if (fp < count) {
        first_tail = p + (count - fp + g - 1) / g;
    }
    if (first_tail > p) {
        return first_tail;
    }
    int n = p;
    while (n > 0 && t.f(n - 1) >= count) {
        --n;
    }
    return n;
}

namespace {

void check_positive_spec(const Template& t, const PositiveTypeSpec& spec, std::size_t& common_len) {
    const int k = t.arity();
    common_len = 0;
    bool first = true;
    for (const auto& tuple : spec.params) {
        if (static_cast<int>(tuple.size()) != k - 1) {
            throw InputError("each parameter tuple needs k-1 = " + std::to_string(k - 1) +
                             " stems");
        }
        for (const auto& s : tuple) {
            if (first) {
                common_len = s.length();
                first = false;
            } else if (s.length() != common_len) {
                throw InputError("parameter stems must share one length");
            }
            if (!in_tree(t, s)) {
                throw InputError("parameter stem is not in the tree of the template");
            }
        }
    }
    if (spec.x_stem && !in_tree(t, *spec.x_stem)) {
        throw InputError("x stem is not in the tree of the template");
    }
}

} // namespace

int required_check_depth(const Template& t, const PositiveTypeSpec& spec) {
    std::size_t len = 0;
    check_positive_spec(t, spec, len);
    const int count = std::max<int>(1, static_cast<int>(spec.params.size()));
    return std::max(static_cast<int>(len), m_star(t, count) + 1);
}

PositiveTypeDecision decide_positive_type(const Template& t, const PositiveTypeSpec& spec,
                                          int check_depth) {
    const int required = required_check_depth(t, spec);
    if (check_depth < required) {
        throw InputError("check depth " + std::to_string(check_depth) +
                         " is below the sound bound " + std::to_string(required));
    }
    const int depth = std::max(check_depth,
                               spec.x_stem ? static_cast<int>(spec.x_stem->length()) : 0);
    const int k = t.arity();

    // Canonical extension of each parameter to the check depth.
    std::vector<StemTuple> params;
    params.reserve(spec.params.size());
    for (const auto& tuple : spec.params) {
        StemTuple ext;
        for (const auto& s : tuple) {
            ext.push_back(complete_to_leaf(t, s, {}, static_cast<std::size_t>(depth)));
        }
        params.push_back(std::move(ext));
    }

    PositiveTypeDecision out;
    out.depth = depth;
    std::vector<int> path;
    path.reserve(static_cast<std::size_t>(depth));
    Tuple partial(static_cast<std::size_t>(k - 1));
    for (int l = 0; l < depth; ++l) {
        const Level lv = t.level(l);
        VertexSet common(lv.graph.size(), true);
        for (const auto& tuple : params) {
            for (int j = 0; j < k - 1; ++j) {
                partial[j] = tuple[j][static_cast<std::size_t>(l)];
            }
            common &= lv.graph.witness_set(partial);
        }
        int choice = -1;
        if (spec.x_stem && l < static_cast<int>(spec.x_stem->length())) {
            const int forced = (*spec.x_stem)[static_cast<std::size_t>(l)];
            if (common.test(forced)) {
                choice = forced;
            }
        } else {
            choice = common.first();
        }
        if (choice < 0) {
            out.consistent = false;
            out.failing_level = l;
            return out;
        }
        path.push_back(choice);
    }
    out.consistent = true;
    out.witness = LeafStem(std::move(path));
    return out;
}

PositiveTypeDecision decide_positive_type(const Template& t, const PositiveTypeSpec& spec) {
    return decide_positive_type(t, spec, required_check_depth(t, spec));
}

std::vector<Tuple> increasing_tuples(int n, int len) {
    std::vector<Tuple> out;
    if (len < 0 || len > n) {
        return out;
    }
    Tuple c(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
        c[i] = i;
    }
    for (;;) {
        out.push_back(c);
        int i = len - 1;
        while (i >= 0 && c[i] == n - len + i) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++c[i];
        for (int j = i + 1; j < len; ++j) {
            c[j] = c[j - 1] + 1;
        }
    }
    return out;
}

QfFormulaSpec make_qf_spec(std::vector<LeafStem> params, LeafStem x_leaf,
                           std::vector<Tuple> positive, int arity) {
    QfFormulaSpec spec;
    const int n = static_cast<int>(params.size());
    spec.params = std::move(params);
    spec.x_leaf = std::move(x_leaf);
    spec.classes.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        spec.classes[i] = i;
    }
    std::sort(positive.begin(), positive.end());
    spec.positive = positive;
    for (auto& tup : increasing_tuples(n, arity - 1)) {
        if (!std::binary_search(positive.begin(), positive.end(), tup)) {
            spec.negative.push_back(std::move(tup));
        }
    }
    return spec;
}

namespace {

void check_qf_spec(const Template& t, int m, const QfFormulaSpec& spec) {
    const int k = t.arity();
    const int n = static_cast<int>(spec.params.size());
    if (static_cast<int>(spec.classes.size()) != n) {
        throw InputError("equality pattern must label every parameter");
    }
    if (static_cast<int>(spec.x_leaf.length()) != m || !in_tree(t, spec.x_leaf)) {
        throw InputError("x leaf must be a tree stem of length m = " + std::to_string(m));
    }
    for (const auto& p : spec.params) {
        if (static_cast<int>(p.length()) != m || !in_tree(t, p)) {
            throw InputError("parameter leaves must be tree stems of length m = " +
                             std::to_string(m));
        }
    }
    if (spec.x_equals && (*spec.x_equals < 0 || *spec.x_equals >= n)) {
        throw InputError("x_equals names a parameter that does not exist");
    }
    std::set<Tuple> seen;
    for (const auto* family : {&spec.positive, &spec.negative}) {
        for (const auto& tup : *family) {
            if (static_cast<int>(tup.size()) != k - 1) {
                throw InputError("edge tuples need k-1 parameter indices");
            }
            for (std::size_t i = 0; i < tup.size(); ++i) {
                if (tup[i] < 0 || tup[i] >= n || (i > 0 && tup[i] <= tup[i - 1])) {
                    throw InputError("edge tuples must be increasing parameter indices");
                }
            }
            if (!seen.insert(tup).second) {
                throw InputError("a tuple appears twice across C and D");
            }
        }
    }
    if (seen.size() != increasing_tuples(n, k - 1).size()) {
        throw InputError("C and D must cover every increasing (k-1)-tuple");
    }
}

Tuple class_multiset(const QfFormulaSpec& spec, const Tuple& tup) {
    Tuple out;
    for (int i : tup) {
        out.push_back(spec.classes[static_cast<std::size_t>(i)]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool has_repeated_class(const Tuple& sorted_classes) {
    return std::adjacent_find(sorted_classes.begin(), sorted_classes.end()) != sorted_classes.end();
}

bool edges_allowed_below(const Template& t, int m, const LeafStem& x, const QfFormulaSpec& spec,
                         const Tuple& tup) {
    Tuple edge(tup.size() + 1);
    for (int l = 0; l < m; ++l) {
        edge[0] = x[static_cast<std::size_t>(l)];
        for (std::size_t j = 0; j < tup.size(); ++j) {
            edge[j + 1] = spec.params[static_cast<std::size_t>(tup[j])][static_cast<std::size_t>(l)];
        }
        if (!t.level(l).graph.is_edge(edge)) {
            return false;
        }
    }
    return true;
}

} // namespace

bool decide_qf_formula(const Template& t, int m, const QfFormulaSpec& spec, bool for_limit_theory) {
    if (m < 0) {
        throw InputError("level m must be >= 0");
    }
    check_qf_spec(t, m, spec);
    const int n = static_cast<int>(spec.params.size());

    // (i) equal parameters share a leaf.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (spec.classes[i] == spec.classes[j] && !(spec.params[i] == spec.params[j])) {
                return false;
            }
        }
    }

    // (iii) no C tuple equals a D tuple up to permutation once equal
    // parameters are identified.
    std::set<Tuple> positive_classes;
    for (const auto& tup : spec.positive) {
        auto cls = class_multiset(spec, tup);
        if (has_repeated_class(cls)) {
            return false;  // R holds only on distinct tuples
        }
        positive_classes.insert(std::move(cls));
    }
    for (const auto& tup : spec.negative) {
        if (positive_classes.count(class_multiset(spec, tup)) != 0) {
            return false;
        }
    }

    if (spec.x_equals) {
        // x is a parameter: only facts about the parameters remain.
        const int i = *spec.x_equals;
        if (!(spec.x_leaf == spec.params[static_cast<std::size_t>(i)])) {
            return false;
        }
        for (const auto& tup : spec.positive) {
            for (int j : tup) {
                if (spec.classes[static_cast<std::size_t>(j)] == spec.classes[static_cast<std::size_t>(i)]) {
                    return false;
                }
            }
            if (!edges_allowed_below(t, m, spec.x_leaf, spec, tup)) {
                return false;
            }
        }
        return true;
    }

    // (ii) every positive edge is allowed at each level below m.
    for (const auto& tup : spec.positive) {
        if (!edges_allowed_below(t, m, spec.x_leaf, spec, tup)) {
            return false;
        }
    }

    if (for_limit_theory && !spec.positive.empty()) {
        PositiveTypeSpec pos;
        pos.x_stem = spec.x_leaf;
        for (const auto& tup : spec.positive) {
            StemTuple st;
            for (int j : tup) {
                st.push_back(spec.params[static_cast<std::size_t>(j)]);
            }
            pos.params.push_back(std::move(st));
        }
        const int depth = std::max(m, m_star(t, static_cast<int>(pos.params.size())) + 1);
        if (!decide_positive_type(t, pos, depth).consistent) {
            return false;
        }
    }
    return true;
}

namespace {

LeafStem random_stem(const Template& t, int length, Rng& rng) {
    std::vector<int> p(static_cast<std::size_t>(length));
    for (int l = 0; l < length; ++l) {
        p[l] = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(t.level_size(l))));
    }
    return LeafStem(std::move(p));
}

struct TrialOutcome {
    bool consistent = false;
    std::uint64_t extensions = 0;
    std::optional<TransferCounterexample> counterexample;
};

constexpr std::uint64_t kMaxEnumeratedExtensions = 4096;
constexpr std::uint64_t kSampledExtensions = 256;

TrialOutcome run_transfer_trial(const Template& t, int m, int ms, std::uint64_t seed,
                                std::uint64_t trial) {
    const int k = t.arity();
    Rng rng = derived_rng(seed, trial);
    const int n = m >= 2 ? uniform_int(rng, 1, m - 1) : 0;

    std::vector<LeafStem> params;
    for (int i = 0; i < n; ++i) {
        params.push_back(random_stem(t, ms, rng));
    }
    auto pool = increasing_tuples(n, k - 1);
    shuffle_in_place(pool, rng);
    const int max_c = std::min<int>(m, static_cast<int>(pool.size()));
    const int c_size = uniform_int(rng, 0, max_c);
    std::vector<Tuple> positive(pool.begin(), pool.begin() + c_size);

    // Half the trials place x on the least leaf compatible with C, so that
    // consistent formulas are well represented.
    LeafStem x_leaf = random_stem(t, ms, rng);
    if (bernoulli(rng, 0.5)) {
        std::vector<int> path;
        bool ok = true;
        Tuple partial(static_cast<std::size_t>(k - 1));
        for (int l = 0; l < ms && ok; ++l) {
            const Level lv = t.level(l);
            VertexSet common(lv.graph.size(), true);
            for (const auto& tup : positive) {
                for (int j = 0; j < k - 1; ++j) {
                    partial[j] = params[static_cast<std::size_t>(tup[j])][static_cast<std::size_t>(l)];
                }
                common &= lv.graph.witness_set(partial);
            }
            ok = common.any();
            path.push_back(common.first());
        }
        if (ok) {
            x_leaf = LeafStem(std::move(path));
        }
    }

    const QfFormulaSpec spec = make_qf_spec(params, x_leaf, positive, k);
    TrialOutcome out;
    out.consistent = decide_qf_formula(t, ms, spec, false);

    const std::uint64_t next_size = static_cast<std::uint64_t>(t.level_size(ms));
    std::uint64_t combos = 1;
    for (int i = 0; i < n && combos <= kMaxEnumeratedExtensions; ++i) {
        combos *= next_size;
    }
    const bool enumerate = combos <= kMaxEnumeratedExtensions;
    const std::uint64_t count = enumerate ? combos : kSampledExtensions;

    QfFormulaSpec next = spec;
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    for (std::uint64_t e = 0; e < count; ++e) {
        if (enumerate) {
            std::uint64_t code = e;
            for (int i = 0; i < n; ++i) {
                digits[i] = static_cast<int>(code % next_size);
                code /= next_size;
            }
        } else {
            for (int i = 0; i < n; ++i) {
                digits[i] = static_cast<int>(uniform_below(rng, next_size));
            }
        }
        for (int i = 0; i < n; ++i) {
            next.params[static_cast<std::size_t>(i)] = spec.params[static_cast<std::size_t>(i)].extended(digits[i]);
        }
        bool some_x = false;
        for (int s = 0; s < static_cast<int>(next_size) && !some_x; ++s) {
            next.x_leaf = spec.x_leaf.extended(s);
            some_x = decide_qf_formula(t, ms + 1, next, false);
        }
        ++out.extensions;
        if (some_x != out.consistent) {
            TransferCounterexample cx;
            cx.formula = spec;
            cx.extended_params = next.params;
            cx.consistent_at_m_star = out.consistent;
            cx.consistent_at_next = some_x;
            cx.trial = trial;
            out.counterexample = std::move(cx);
            break;
        }
    }
    return out;
}

} // namespace

TransferReport transfer_check(const Template& t, int m, std::uint64_t trials, std::uint64_t seed,
                              int workers) {
    if (m < 1) {
        throw InputError("transfer_check needs m >= 1");
    }
    TransferReport report;
    report.m = m;
    report.m_star = m_star(t, m);
    if (t.prefix_depth() < report.m_star + 1) {
        throw InputError("prefix depth " + std::to_string(t.prefix_depth()) +
                         " is below m_star + 1 = " + std::to_string(report.m_star + 1));
    }
    report.trials = trials;

    std::vector<TrialOutcome> outcomes(trials);
    parallel_for(trials, workers, [&](std::size_t i) {
        outcomes[i] = run_transfer_trial(t, m, report.m_star, seed, i);
    });
    for (auto& o : outcomes) {
        report.consistent_trials += o.consistent ? 1 : 0;
        report.extensions_checked += o.extensions;
        if (o.counterexample) {
            report.counterexamples.push_back(std::move(*o.counterexample));
        }
    }
    return report;
}

} // namespace htpl
