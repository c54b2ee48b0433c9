#include "htpl/signature.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <string>

#include "htpl/errors.hpp"
#include "htpl/parallel.hpp"
#include "htpl/typecheck.hpp"
#include "htpl/vertex_set.hpp"

namespace htpl {

namespace {

constexpr std::uint64_t kMaxSignatureDepth = 1u << 20;

} // namespace

std::vector<LeafStem> predicate_enumeration(const Template& t, int depth) {
    if (depth < 1) {
        throw InputError("predicate enumeration depth must be >= 1");
    }
    if (predicate_count(t, depth) > kMaxSignatureDepth) {
        throw InputError("predicate enumeration is too large at depth " + std::to_string(depth));
    }
    std::vector<LeafStem> out;
    for (int len = 1; len <= depth; ++len) {
        auto stems = all_stems(t, len);
        out.insert(out.end(), std::make_move_iterator(stems.begin()),
                   std::make_move_iterator(stems.end()));
    }
    return out;
}

std::vector<std::vector<int>> equivalence_relations(int elements) {
    if (elements < 1) {
        throw InputError("equivalence relations need at least one element");
    }
    std::vector<std::vector<int>> all;
    std::vector<int> rgs(static_cast<std::size_t>(elements), 0);
    // Restricted growth strings in lexicographic order.
    for (;;) {
        all.push_back(rgs);
        int i = elements - 1;
        for (; i >= 1; --i) {
            const int limit = *std::max_element(rgs.begin(), rgs.begin() + i) + 1;
            if (rgs[i] < limit) {
                break;
            }
        }
        if (i < 1) {
            break;
        }
        ++rgs[i];
        for (int j = i + 1; j < elements; ++j) {
            rgs[j] = 0;
        }
    }
    auto blocks = [](const std::vector<int>& r) { return *std::max_element(r.begin(), r.end()); };
    std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
        return blocks(a) > blocks(b);
    });
    return all;
}

int equality_code(const std::vector<int>& classes) {
    if (classes.empty()) {
        throw InputError("equality pattern needs at least one variable");
    }
    std::vector<int> rgs;
    std::map<int, int> relabel;
    for (int c : classes) {
        auto it = relabel.emplace(c, static_cast<int>(relabel.size())).first;
        rgs.push_back(it->second);
    }
    const auto all = equivalence_relations(static_cast<int>(classes.size()));
    return static_cast<int>(std::find(all.begin(), all.end(), rgs) - all.begin());
}

ParamType distinct_params(StemTuple stems) {
    ParamType p;
    for (std::size_t i = 0; i < stems.size(); ++i) {
        p.classes.push_back(static_cast<int>(i));
    }
    p.stems = std::move(stems);
    return p;
}

std::uint64_t predicate_count(const Template& t, int length) {
    std::uint64_t total = 0;
    std::uint64_t width = 1;
    for (int l = 0; l < length; ++l) {
        const auto size = static_cast<std::uint64_t>(t.level_size(l));
        if (width > std::numeric_limits<std::uint64_t>::max() / size) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        width *= size;
        total = width > std::numeric_limits<std::uint64_t>::max() - total
                    ? std::numeric_limits<std::uint64_t>::max()
                    : total + width;
    }
    return total;
}

std::uint64_t signature_cover_index(const Template& t, int length) {
    if (length < 0) {
        throw InputError("length must be >= 0");
    }
    if (length == 0) {
        return 0;
    }
    const auto c = predicate_count(t, length);
    return c == std::numeric_limits<std::uint64_t>::max() ? c : c + 1;
}

std::uint64_t analytic_F_bound(const Template& t, int s) {
    return signature_cover_index(t, m_star(t, s));
}

int G_analytic(const Template& t, std::uint64_t n) {
    int best = 0;
    // m_star grows without bound in s, so the scan stops.
    for (int s = 1;; ++s) {
        if (analytic_F_bound(t, s) > n) {
            return best;
        }
        best = s;
    }
}

namespace {

// Stem length needed to answer the predicates of a depth-n signature.
int needed_stem_length(const Template& t, std::uint64_t n) {
    if (n <= 1) {
        return 0;
    }
    if (n - 1 > kMaxSignatureDepth) {
        throw InputError("signature depth " + std::to_string(n) + " is too large");
    }
    int len = 0;
    while (predicate_count(t, len) < n - 1) {
        ++len;
    }
    return len;
}

std::vector<std::uint32_t> signature_values(const std::vector<int>& classes, const StemTuple& stems,
                                            const std::vector<LeafStem>& predicates,
                                            std::uint64_t depth) {
    std::vector<std::uint32_t> values;
    if (depth == 0) {
        return values;
    }
    values.reserve(depth);
    values.push_back(static_cast<std::uint32_t>(equality_code(classes)));
    for (std::uint64_t i = 1; i < depth; ++i) {
        const LeafStem& psi = predicates[i - 1];
        std::uint32_t mask = 0;
        for (std::size_t j = 0; j < stems.size(); ++j) {
            if (psi.is_prefix_of(stems[j])) {
                mask |= 1u << j;
            }
        }
        values.push_back(mask);
    }
    return values;
}

} // namespace

SignatureFunction f_signature(const Template& t, const ParamType& p, int depth) {
    if (depth < 0) {
        throw InputError("signature depth must be >= 0");
    }
    if (static_cast<int>(p.stems.size()) != t.arity() - 1 ||
        p.classes.size() != p.stems.size()) {
        throw InputError("parameter type needs k-1 stems and k-1 class labels");
    }
    const int len = needed_stem_length(t, static_cast<std::uint64_t>(depth));
    for (const auto& s : p.stems) {
        if (static_cast<int>(s.length()) < len) {
            throw InputError("stem of length " + std::to_string(s.length()) +
                             " is too short for a depth-" + std::to_string(depth) +
                             " signature (needs " + std::to_string(len) + ")");
        }
        if (!in_tree(t, s)) {
            throw InputError("stem is not in the tree of the template");
        }
    }
    const auto preds = len > 0 ? predicate_enumeration(t, len) : std::vector<LeafStem>{};
    return SignatureFunction{signature_values(p.classes, p.stems, preds,
                                              static_cast<std::uint64_t>(depth))};
}

namespace {

std::uint64_t agreement_length(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    std::size_t i = 0;
    while (i < n && a[i] == b[i]) {
        ++i;
    }
    return i;
}

// The bounded search space for ⊕_{s,n}: non-decreasing (k-1)-tuples over a
// finite stem alphabet, each with its per-level witness sets and its
// signature.
struct Universe {
    int check_depth = 0;
    int leaf_length = 0;
    std::vector<StemTuple> tuples;
    // witness[u][l]
    std::vector<std::vector<VertexSet>> witness;
    std::vector<std::vector<std::uint32_t>> signature;
    std::vector<int> sig_class;
    std::vector<std::vector<int>> class_members;
};

Universe build_universe(const Template& t, int s, std::uint64_t n, std::uint64_t sig_cap,
                        const SearchBudget& budget) {
    if (budget.stem_depth < 0 || budget.alphabet < 1) {
        throw InputError("search budget needs stem_depth >= 0 and alphabet >= 1");
    }
    const int k = t.arity();
    Universe u;
    u.check_depth = std::max(budget.stem_depth, m_star(t, s) + 1);
    u.leaf_length = std::max(u.check_depth, needed_stem_length(t, sig_cap));

    std::vector<LeafStem> stems;
    {
        std::vector<int> cur(static_cast<std::size_t>(budget.stem_depth), 0);
        std::vector<int> top(static_cast<std::size_t>(budget.stem_depth));
        for (int l = 0; l < budget.stem_depth; ++l) {
            top[l] = std::min(budget.alphabet, t.level_size(l));
        }
        for (;;) {
            stems.push_back(LeafStem(cur).zero_extended(static_cast<std::size_t>(u.leaf_length)));
            int i = budget.stem_depth - 1;
            while (i >= 0 && cur[i] == top[i] - 1) {
                cur[i] = 0;
                --i;
            }
            if (i < 0) {
                break;
            }
            ++cur[i];
        }
    }

    const int r = k - 1;
    std::vector<int> idx(static_cast<std::size_t>(r), 0);
    const int S = static_cast<int>(stems.size());
    for (;;) {
        StemTuple tup;
        for (int i : idx) {
            tup.push_back(stems[static_cast<std::size_t>(i)]);
        }
        u.tuples.push_back(std::move(tup));
        int i = r - 1;
        while (i >= 0 && idx[i] == S - 1) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++idx[i];
        for (int j = i + 1; j < r; ++j) {
            idx[j] = idx[i];
        }
    }

    const auto graphs = t.graphs(u.check_depth);
    const int len = needed_stem_length(t, sig_cap);
    const auto preds = len > 0 ? predicate_enumeration(t, len) : std::vector<LeafStem>{};
    std::vector<int> classes(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
        classes[i] = i;
    }
    std::map<std::vector<std::uint32_t>, int> class_of;
    Tuple partial(static_cast<std::size_t>(r));
    for (const auto& tup : u.tuples) {
        std::vector<VertexSet> ws;
        for (int l = 0; l < u.check_depth; ++l) {
            for (int j = 0; j < r; ++j) {
                partial[j] = tup[j][static_cast<std::size_t>(l)];
            }
            ws.push_back(graphs[l].witness_set(partial));
        }
        u.witness.push_back(std::move(ws));
        auto sig = signature_values(classes, tup, preds, sig_cap);
        std::vector<std::uint32_t> key(sig.begin(), sig.begin() + static_cast<long>(n));
        auto it = class_of.emplace(std::move(key), static_cast<int>(u.class_members.size())).first;
        if (it->second == static_cast<int>(u.class_members.size())) {
            u.class_members.emplace_back();
        }
        u.class_members[static_cast<std::size_t>(it->second)].push_back(
            static_cast<int>(u.sig_class.size()));
        u.sig_class.push_back(it->second);
        u.signature.push_back(std::move(sig));
    }
    return u;
}

struct PartitionResult {
    bool exhausted = false;
    std::uint64_t nodes = 0;
    std::optional<std::pair<std::vector<int>, std::vector<int>>> hit;  // a, b indices
};

struct Searcher {
    const Universe& u;
    int s;
    std::uint64_t max_nodes;
    std::uint64_t nodes = 0;
    std::map<std::vector<int>, std::optional<std::vector<int>>> cache;

    bool out_of_budget() const { return nodes > max_nodes; }

    // Consistent a-family paired position-wise with the class sequence.
    bool find_a(const std::vector<int>& classes, std::size_t pos, std::vector<VertexSet>& common,
                std::vector<int>& chosen) {
        if (pos == classes.size()) {
            return true;
        }
        for (int cand : u.class_members[static_cast<std::size_t>(classes[pos])]) {
            if (++nodes > max_nodes) {
                return false;
            }
            std::vector<VertexSet> next = common;
            bool ok = true;
            for (int l = 0; l < u.check_depth && ok; ++l) {
                next[l] &= u.witness[static_cast<std::size_t>(cand)][static_cast<std::size_t>(l)];
                ok = next[l].any();
            }
            if (!ok) {
                continue;
            }
            chosen.push_back(cand);
            std::swap(common, next);
            if (find_a(classes, pos + 1, common, chosen)) {
                return true;
            }
            std::swap(common, next);
            chosen.pop_back();
            if (out_of_budget()) {
                return false;
            }
        }
        return false;
    }

    bool consistent(const std::vector<int>& family) const {
        for (int l = 0; l < u.check_depth; ++l) {
            VertexSet c = u.witness[static_cast<std::size_t>(family[0])][static_cast<std::size_t>(l)];
            for (std::size_t i = 1; i < family.size(); ++i) {
                c &= u.witness[static_cast<std::size_t>(family[i])][static_cast<std::size_t>(l)];
            }
            if (c.none()) {
                return false;
            }
        }
        return true;
    }

    PartitionResult run(int first) {
        PartitionResult res;
        const int total = static_cast<int>(u.tuples.size());
        std::vector<int> b(static_cast<std::size_t>(s), first);
        for (;;) {
            if (++nodes > max_nodes) {
                res.exhausted = true;
                break;
            }
            if (!consistent(b)) {
                // Pairing is position-wise, so the cache keys on the
                // sequence of classes.
                std::vector<int> classes;
                for (int x : b) {
                    classes.push_back(u.sig_class[static_cast<std::size_t>(x)]);
                }
                auto it = cache.find(classes);
                if (it == cache.end()) {
                    std::vector<VertexSet> common;
                    for (int l = 0; l < u.check_depth; ++l) {
                        common.emplace_back(u.witness[0][static_cast<std::size_t>(l)].universe(), true);
                    }
                    std::vector<int> chosen;
                    const bool found = find_a(classes, 0, common, chosen);
                    if (out_of_budget()) {
                        res.exhausted = true;
                        break;
                    }
                    it = cache.emplace(classes, found ? std::optional(chosen) : std::nullopt).first;
                }
                if (it->second) {
                    res.hit = std::make_pair(*it->second, b);
                    break;
                }
            }
            int i = s - 1;
            while (i >= 1 && b[i] == total - 1) {
                --i;
            }
            if (i < 1) {
                break;
            }
            ++b[i];
            for (int j = i + 1; j < s; ++j) {
                b[j] = b[i];
            }
        }
        res.nodes = nodes;
        return res;
    }
};

} // namespace

OplusResult oplus_test(const Template& t, int s, std::uint64_t n, const SearchBudget& budget) {
    if (s < 1) {
        throw InputError("oplus_test needs s >= 1");
    }
    const std::uint64_t sig_cap = std::max(n, analytic_F_bound(t, s));
    const Universe u = build_universe(t, s, n, sig_cap, budget);

    // Partitions past a known hit are skipped. The reported result only
    // looks at partitions up to the first hit, and all of those always run,
    // so the outcome does not depend on the worker count.
    std::vector<PartitionResult> parts(u.tuples.size());
    std::atomic<std::size_t> best_hit{parts.size()};
    parallel_for(parts.size(), budget.workers, [&](std::size_t first) {
        if (first > best_hit.load()) {
            return;
        }
        Searcher searcher{u, s, budget.max_nodes, 0, {}};
        parts[first] = searcher.run(static_cast<int>(first));
        if (parts[first].hit) {
            std::size_t cur = best_hit.load();
            while (first < cur && !best_hit.compare_exchange_weak(cur, first)) {
            }
        }
    });

    OplusResult out;
    bool exhausted = false;
    for (const auto& p : parts) {
        if (out.certificate) {
            break;
        }
        out.nodes += p.nodes;
        if (p.hit && !out.certificate) {
            OplusCertificate cert;
            cert.s = s;
            cert.n = n;
            cert.agreement = sig_cap;
            for (std::size_t i = 0; i < p.hit->first.size(); ++i) {
                const auto ai = static_cast<std::size_t>(p.hit->first[i]);
                const auto bi = static_cast<std::size_t>(p.hit->second[i]);
                cert.a_family.push_back(u.tuples[ai]);
                cert.b_family.push_back(u.tuples[bi]);
                cert.agreement = std::min(cert.agreement, agreement_length(u.signature[ai], u.signature[bi]));
            }
            PositiveTypeSpec spec;
            spec.params = cert.b_family;
            cert.b_failing_level = decide_positive_type(t, spec, u.check_depth).failing_level;
            out.certificate = std::move(cert);
        }
        exhausted = exhausted || p.exhausted;
    }
    if (out.certificate) {
        out.status = OplusStatus::counterexample;
    } else if (exhausted) {
        out.status = OplusStatus::budget_exhausted;
    }
    return out;
}

bool verify_certificate(const Template& t, const OplusCertificate& cert) {
    if (cert.s < 1 || static_cast<int>(cert.a_family.size()) != cert.s ||
        static_cast<int>(cert.b_family.size()) != cert.s) {
        return false;
    }
    try {
        for (int i = 0; i < cert.s; ++i) {
            const auto fa = f_signature(t, distinct_params(cert.a_family[i]), static_cast<int>(cert.n));
            const auto fb = f_signature(t, distinct_params(cert.b_family[i]), static_cast<int>(cert.n));
            if (!(fa == fb)) {
                return false;
            }
        }
        PositiveTypeSpec a;
        a.params = cert.a_family;
        PositiveTypeSpec b;
        b.params = cert.b_family;
        return decide_positive_type(t, a).consistent && !decide_positive_type(t, b).consistent;
    } catch (const InputError&) {
        return false;
    }
}

FEstimate F_estimate(const Template& t, int s, const SearchBudget& budget) {
    if (s < 1) {
        throw InputError("F_estimate needs s >= 1");
    }
    FEstimate est;
    est.s = s;
    est.analytic_bound = analytic_F_bound(t, s);
    if (t.everywhere_complete()) {
        est.value = 0;
        est.analytic = true;
        return est;
    }
    std::uint64_t n = 0;
    while (n < est.analytic_bound) {
        const auto r = oplus_test(t, s, n, budget);
        if (r.status == OplusStatus::counterexample) {
            n = r.certificate->agreement + 1;
            est.certificates.push_back(*r.certificate);
            continue;
        }
        est.value = n;
        est.exhausted = r.status == OplusStatus::budget_exhausted;
        return est;
    }
    est.value = n;
    est.analytic = n == est.analytic_bound;
    return est;
}

GEstimate G_estimate(const Template& t, std::uint64_t n, int s_cap, const SearchBudget& budget) {
    if (s_cap < 1) {
        throw InputError("G_estimate needs s_cap >= 1");
    }
    GEstimate est;
    est.n = n;
    if (t.everywhere_complete()) {
        est.infinite = true;
        return est;
    }
    est.analytic_lower = G_analytic(t, n);
    for (int s = 1; s <= s_cap; ++s) {
        est.searched_up_to = s;
        const auto r = oplus_test(t, s, n, budget);
        if (r.status == OplusStatus::counterexample) {
            est.value = s - 1;
            est.certificate = r.certificate;
            return est;
        }
        if (r.status == OplusStatus::budget_exhausted) {
            est.value = s - 1;
            est.exhausted = true;
            return est;
        }
        est.value = s;
    }
    return est;
}

} // namespace htpl
