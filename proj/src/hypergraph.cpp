#include "htpl/hypergraph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <string>

#include "htpl/errors.hpp"
#include "htpl/rng.hpp"

namespace htpl {

namespace {

constexpr std::uint64_t kMaxMaterializedSubsets = std::uint64_t{1} << 28;

// Advances `c` (increasing, entries < n) to the next combination in
// lexicographic order; false when `c` was the last one.
bool next_combination(std::vector<int>& c, int n) {
    const int r = static_cast<int>(c.size());
    int i = r - 1;
    while (i >= 0 && c[i] == n - r + i) {
        --i;
    }
    if (i < 0) {
        return false;
    }
    ++c[i];
    for (int j = i + 1; j < r; ++j) {
        c[j] = c[j - 1] + 1;
    }
    return true;
}

std::vector<int> first_combination(int r) {
    std::vector<int> c(r);
    for (int i = 0; i < r; ++i) {
        c[i] = i;
    }
    return c;
}

} // namespace

Hypergraph::Hypergraph(int arity, int size) : arity_(arity), size_(size) {
    if (arity < 2 || arity > kMaxArity) {
        throw InputError("arity must be in [2, " + std::to_string(kMaxArity) + "], got " +
                         std::to_string(arity));
    }
    if (size < 1) {
        throw InputError("hypergraph needs at least one vertex");
    }
    materialize();
}

Hypergraph::Hypergraph(int arity, int size, const std::vector<Tuple>& uniform_edges)
    : Hypergraph(arity, size) {
    for (const auto& e : uniform_edges) {
        set_uniform_edge(e, true);
    }
}

Hypergraph Hypergraph::complete(int arity, int size) {
    if (arity < 2 || arity > kMaxArity) {
        throw InputError("arity must be in [2, " + std::to_string(kMaxArity) + "]");
    }
    if (size < 1) {
        throw InputError("hypergraph needs at least one vertex");
    }
    Hypergraph h(arity, 1);
    h.size_ = size;
    h.complete_ = true;
    h.binom_.clear();
    h.bits_.clear();
    h.subset_count_ = 0;
    return h;
}

void Hypergraph::materialize() {
    const int k = arity_;
    binom_.assign(static_cast<std::size_t>(size_ + 1) * (k + 1), 0);
    for (int n = 0; n <= size_; ++n) {
        binom_[static_cast<std::size_t>(n) * (k + 1)] = 1;
        for (int r = 1; r <= k && r <= n; ++r) {
            const std::uint64_t a = binom(n - 1, r - 1);
            const std::uint64_t b = binom(n - 1, r);
            const std::uint64_t sum = a + b;
            if (sum < a || sum > kMaxMaterializedSubsets) {
                throw InputError("hypergraph too large to store explicitly (" +
                                 std::to_string(size_) + " vertices, arity " +
                                 std::to_string(k) + ")");
            }
            binom_[static_cast<std::size_t>(n) * (k + 1) + r] = sum;
        }
    }
    subset_count_ = binom(size_, k);
    const bool was_complete = complete_;
    bits_.assign((subset_count_ + 63) / 64, 0);
    if (was_complete) {
        for (auto& w : bits_) {
            w = ~std::uint64_t{0};
        }
        if (subset_count_ % 64 != 0 && !bits_.empty()) {
            bits_.back() &= (std::uint64_t{1} << (subset_count_ % 64)) - 1;
        }
    }
    complete_ = false;
}

void Hypergraph::check_tuple(std::span<const int> tuple, std::size_t expected_length) const {
    if (tuple.size() != expected_length) {
        throw InputError("expected a tuple of " + std::to_string(expected_length) +
                         " vertices, got " + std::to_string(tuple.size()));
    }
    for (int v : tuple) {
        if (v < 0 || v >= size_) {
            throw InputError("vertex " + std::to_string(v) + " out of range for a level with " +
                             std::to_string(size_) + " vertices");
        }
    }
}

std::uint64_t Hypergraph::rank(const int* sorted) const {
    std::uint64_t r = 0;
    for (int i = 0; i < arity_; ++i) {
        r += binom(sorted[i], i + 1);
    }
    return r;
}

bool Hypergraph::has_sorted_distinct(const int* sorted) const {
    if (complete_) {
        return true;
    }
    const std::uint64_t r = rank(sorted);
    return (bits_[r >> 6] >> (r & 63)) & 1;
}

bool Hypergraph::is_edge(std::span<const int> tuple) const {
    check_tuple(tuple, static_cast<std::size_t>(arity_));
    if (complete_) {
        return true;
    }
    std::array<int, kMaxArity> buf{};
    std::copy(tuple.begin(), tuple.end(), buf.begin());
    std::sort(buf.begin(), buf.begin() + arity_);
    for (int i = 1; i < arity_; ++i) {
        if (buf[i] == buf[i - 1]) {
            return true;
        }
    }
    return has_sorted_distinct(buf.data());
}

void Hypergraph::set_uniform_edge(std::span<const int> vertices, bool present) {
    check_tuple(vertices, static_cast<std::size_t>(arity_));
    std::array<int, kMaxArity> buf{};
    std::copy(vertices.begin(), vertices.end(), buf.begin());
    std::sort(buf.begin(), buf.begin() + arity_);
    for (int i = 1; i < arity_; ++i) {
        if (buf[i] == buf[i - 1]) {
            throw InputError("uniform edges need " + std::to_string(arity_) +
                             " distinct vertices");
        }
    }
    if (complete_) {
        if (present) {
            return;
        }
        materialize();
    }
    const std::uint64_t r = rank(buf.data());
    if (present) {
        bits_[r >> 6] |= std::uint64_t{1} << (r & 63);
    } else {
        bits_[r >> 6] &= ~(std::uint64_t{1} << (r & 63));
    }
}

std::uint64_t Hypergraph::uniform_edge_count() const {
    if (complete_) {
        // Saturating count; the exact value only matters for stored levels.
        std::uint64_t c = 1;
        for (int i = 0; i < arity_; ++i) {
            if (size_ - i <= 0) {
                return 0;
            }
            c = c * static_cast<std::uint64_t>(size_ - i) / static_cast<std::uint64_t>(i + 1);
        }
        return c;
    }
    std::uint64_t c = 0;
    for (auto w : bits_) {
        c += static_cast<std::uint64_t>(std::popcount(w));
    }
    return c;
}

bool Hypergraph::is_complete() const {
    return complete_ || uniform_edge_count() == subset_count_;
}

std::vector<Tuple> Hypergraph::uniform_edges() const {
    std::vector<Tuple> out;
    if (size_ < arity_) {
        return out;
    }
    std::vector<int> c = first_combination(arity_);
    do {
        if (has_sorted_distinct(c.data())) {
            out.push_back(c);
        }
    } while (next_combination(c, size_));
    return out;
}

VertexSet Hypergraph::witness_set(std::span<const int> partial) const {
    check_tuple(partial, static_cast<std::size_t>(arity_ - 1));
    VertexSet w(size_);
    if (complete_) {
        w.fill();
        return w;
    }
    std::array<int, kMaxArity> sorted{};
    std::copy(partial.begin(), partial.end(), sorted.begin());
    const int r = arity_ - 1;
    std::sort(sorted.begin(), sorted.begin() + r);
    for (int i = 1; i < r; ++i) {
        if (sorted[i] == sorted[i - 1]) {
            w.fill();
            return w;
        }
    }
    std::array<int, kMaxArity> full{};
    for (int s = 0; s < size_; ++s) {
        if (std::find(sorted.begin(), sorted.begin() + r, s) != sorted.begin() + r) {
            w.set(s);
            continue;
        }
        std::copy(sorted.begin(), sorted.begin() + r, full.begin());
        full[r] = s;
        std::sort(full.begin(), full.begin() + arity_);
        if (has_sorted_distinct(full.data())) {
            w.set(s);
        }
    }
    return w;
}

bool operator==(const Hypergraph& a, const Hypergraph& b) {
    if (a.arity_ != b.arity_ || a.size_ != b.size_) {
        return false;
    }
    if (a.complete_ || b.complete_) {
        return a.is_complete() && b.is_complete();
    }
    return a.bits_ == b.bits_;
}

std::optional<int> extension_witness(const Hypergraph& h, const std::vector<Tuple>& tuples) {
    if (tuples.empty()) {
        throw InputError("extension_witness needs at least one tuple");
    }
    VertexSet common(h.size(), true);
    for (const auto& t : tuples) {
        common &= h.witness_set(t);
        if (common.none()) {
            return std::nullopt;
        }
    }
    return common.first();
}

namespace {

struct Candidate {
    VertexSet witnesses;
    Tuple representative;
};

// Depth-first search for at most `remaining` candidates whose witness sets,
// intersected with `current`, leave nothing.
class EmptyIntersectionSearch {
public:
    EmptyIntersectionSearch(const std::vector<Candidate>& cands, std::uint64_t budget)
        : cands_(cands), budget_(budget) {}

    // 1 found, 0 none exists, -1 budget exhausted.
    int run(int t) {
        VertexSet all(cands_.front().witnesses.universe(), true);
        chosen_.clear();
        return dfs(0, all, t);
    }

    std::vector<Tuple> witness_family() const {
        std::vector<Tuple> out;
        for (auto i : chosen_) {
            out.push_back(cands_[i].representative);
        }
        return out;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    int dfs(std::size_t start, const VertexSet& current, int remaining) {
        for (std::size_t i = start; i < cands_.size(); ++i) {
            if (++nodes_ > budget_) {
                return -1;
            }
            VertexSet next = current & cands_[i].witnesses;
            if (next == current) {
                continue;
            }
            chosen_.push_back(i);
            if (next.none()) {
                return 1;
            }
            if (remaining > 1) {
                const int r = dfs(i + 1, next, remaining - 1);
                if (r != 0) {
                    return r;
                }
            }
            chosen_.pop_back();
        }
        return 0;
    }

    const std::vector<Candidate>& cands_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<std::size_t> chosen_;
};

std::vector<Candidate> minimal_witness_sets(const Hypergraph& h) {
    const int r = h.arity() - 1;
    std::vector<Candidate> all;
    if (h.size() < r) {
        return all;
    }
    std::vector<int> c = first_combination(r);
    do {
        all.push_back({h.witness_set(c), c});
    } while (next_combination(c, h.size()));

    std::vector<bool> keep(all.size(), false);
    for (std::size_t i = 0; i < all.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < all.size() && !dominated; ++j) {
            if (i == j || !all[j].witnesses.is_subset_of(all[i].witnesses)) {
                continue;
            }
            // Strict subset dominates; among equal sets keep the first.
            dominated = !(all[j].witnesses == all[i].witnesses) || j < i;
        }
        keep[i] = !dominated;
    }
    std::vector<Candidate> minimal;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (keep[i]) {
            minimal.push_back(std::move(all[i]));
        }
    }
    std::stable_sort(minimal.begin(), minimal.end(), [](const Candidate& a, const Candidate& b) {
        return a.witnesses.count() < b.witnesses.count();
    });
    return minimal;
}

} // namespace

ExtensionReport check_extension_property(const Hypergraph& h, int t,
                                         const ExtensionOptions& options) {
    if (t < 1) {
        throw InputError("extension arity t must be >= 1");
    }
    ExtensionReport report;
    if (h.is_complete()) {
        return report;
    }
    const auto cands = minimal_witness_sets(h);
    if (cands.empty()) {
        return report;
    }

    EmptyIntersectionSearch search(cands, options.node_budget);
    const int found = search.run(t);
    report.nodes = search.nodes();
    if (found == 1) {
        report.holds = false;
        report.counterexample = search.witness_family();
        // Pad with repeats so the family has exactly t members.
        while (static_cast<int>(report.counterexample.size()) < t) {
            report.counterexample.push_back(report.counterexample.back());
        }
        return report;
    }
    if (found == 0) {
        return report;
    }

    // Budget exhausted: sample t-families of minimal witness sets instead.
    report.exhaustive = false;
    Rng rng = derived_rng(options.seed, static_cast<std::uint64_t>(t));
    for (std::uint64_t trial = 0; trial < options.sample_trials; ++trial) {
        VertexSet common(h.size(), true);
        std::vector<Tuple> family;
        for (int l = 0; l < t && common.any(); ++l) {
            const auto& c = cands[uniform_below(rng, cands.size())];
            common &= c.witnesses;
            family.push_back(c.representative);
        }
        if (common.none()) {
            while (static_cast<int>(family.size()) < t) {
                family.push_back(family.back());
            }
            report.holds = false;
            report.exhaustive = true;  // a concrete counterexample is definitive
            report.counterexample = std::move(family);
            return report;
        }
    }
    return report;
}

namespace {

template <typename Accept>
bool extend_set(const Hypergraph& h, std::vector<int>& chosen, int start, int target,
                Accept&& accept) {
    if (static_cast<int>(chosen.size()) == target) {
        return true;
    }
    for (int v = start; v < h.size(); ++v) {
        if (h.size() - v < target - static_cast<int>(chosen.size())) {
            break;
        }
        if (!accept(chosen, v)) {
            continue;
        }
        chosen.push_back(v);
        if (extend_set(h, chosen, v + 1, target, accept)) {
            return true;
        }
        chosen.pop_back();
    }
    return false;
}

// Calls visit(subset) for each (k-1)-subset of `chosen` combined with v,
// stopping early when visit returns false.
template <typename Visit>
bool all_new_subsets(const std::vector<int>& chosen, int v, int k, Visit&& visit) {
    const int r = k - 1;
    if (static_cast<int>(chosen.size()) < r) {
        return true;
    }
    std::vector<int> c = first_combination(r);
    Tuple tuple(k);
    do {
        for (int i = 0; i < r; ++i) {
            tuple[i] = chosen[c[i]];
        }
        tuple[r] = v;
        if (!visit(tuple)) {
            return false;
        }
    } while (next_combination(c, static_cast<int>(chosen.size())));
    return true;
}

} // namespace

std::optional<std::vector<int>> find_k_full_clique(const Hypergraph& h, int size) {
    if (size < 1) {
        throw InputError("clique size must be >= 1");
    }
    if (size > h.size()) {
        return std::nullopt;
    }
    std::vector<int> chosen;
    const int k = h.arity();
    const bool ok = extend_set(h, chosen, 0, size, [&](const std::vector<int>& cur, int v) {
        return all_new_subsets(cur, v, k, [&](const Tuple& e) { return h.is_edge(e); });
    });
    if (!ok) {
        return std::nullopt;
    }
    return chosen;
}

std::optional<std::vector<int>> find_k_independent(const Hypergraph& h, int size) {
    if (size < h.arity()) {
        throw InputError("independent sets need at least k = " + std::to_string(h.arity()) +
                         " members");
    }
    if (size > h.size()) {
        return std::nullopt;
    }
    std::vector<int> chosen;
    const int k = h.arity();
    const bool ok = extend_set(h, chosen, 0, size, [&](const std::vector<int>& cur, int v) {
        return all_new_subsets(cur, v, k, [&](const Tuple& e) { return !h.is_edge(e); });
    });
    if (!ok) {
        return std::nullopt;
    }
    return chosen;
}

} // namespace htpl
