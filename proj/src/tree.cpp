#include "htpl/tree.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "htpl/errors.hpp"
#include "htpl/typecheck.hpp"

namespace htpl {

LeafStem LeafStem::prefix(std::size_t len) const {
    if (len > path_.size()) {
        throw InputError("prefix longer than stem");
    }
    return LeafStem(std::vector<int>(path_.begin(), path_.begin() + static_cast<long>(len)));
}

LeafStem LeafStem::extended(int vertex) const {
    auto p = path_;
    p.push_back(vertex);
    return LeafStem(std::move(p));
}

LeafStem LeafStem::zero_extended(std::size_t len) const {
    if (len <= path_.size()) {
        return *this;
    }
    auto p = path_;
    p.resize(len, 0);
    return LeafStem(std::move(p));
}

bool LeafStem::is_prefix_of(const LeafStem& other) const {
    return path_.size() <= other.path_.size() &&
           std::equal(path_.begin(), path_.end(), other.path_.begin());
}

bool in_tree(const Template& t, const LeafStem& stem) {
    for (std::size_t n = 0; n < stem.length(); ++n) {
        if (stem[n] < 0 || stem[n] >= t.level_size(static_cast<int>(n))) {
            return false;
        }
    }
    return true;
}

std::vector<LeafStem> all_stems(const Template& t, int length) {
    std::vector<LeafStem> out;
    std::vector<int> cur(static_cast<std::size_t>(length), 0);
    std::vector<int> sizes(static_cast<std::size_t>(length));
    for (int n = 0; n < length; ++n) {
        sizes[n] = t.level_size(n);
    }
    for (;;) {
        out.emplace_back(cur);
        int i = length - 1;
        while (i >= 0 && cur[i] == sizes[i] - 1) {
            cur[i] = 0;
            --i;
        }
        if (i < 0) {
            break;
        }
        ++cur[i];
    }
    return out;
}

bool einfty_prefix(const Template& t, std::span<const LeafStem> stems) {
    if (static_cast<int>(stems.size()) != t.arity()) {
        throw InputError("einfty_prefix needs exactly k = " + std::to_string(t.arity()) +
                         " stems");
    }
    const std::size_t len = stems.front().length();
    for (const auto& s : stems) {
        if (s.length() != len) {
            throw InputError("einfty_prefix needs stems of a common length");
        }
        if (!in_tree(t, s)) {
            throw InputError("stem is not in the tree of the template");
        }
    }
    Tuple coords(stems.size());
    for (std::size_t l = 0; l < len; ++l) {
        const Level lv = t.level(static_cast<int>(l));
        for (std::size_t i = 0; i < stems.size(); ++i) {
            coords[i] = stems[i][l];
        }
        if (!lv.graph.is_edge(coords)) {
            return false;
        }
    }
    return true;
}

LeafStem complete_to_leaf(const Template& t, const LeafStem& nu,
                          const std::vector<StemTuple>& constraints, std::size_t target_len) {
    const int k = t.arity();
    if (!in_tree(t, nu)) {
        throw InputError("nu is not in the tree of the template");
    }
    if (target_len < nu.length()) {
        throw InputError("target length is shorter than nu");
    }
    for (const auto& tuple : constraints) {
        if (static_cast<int>(tuple.size()) != k - 1) {
            throw InputError("constraint tuples need k-1 stems");
        }
        for (const auto& s : tuple) {
            if (s.length() < target_len) {
                throw InputError("constraint stems must reach the target length");
            }
            if (!in_tree(t, s)) {
                throw InputError("constraint stem is not in the tree of the template");
            }
        }
    }
    if (constraints.empty()) {
        return nu.zero_extended(target_len);
    }

    const int needed = m_star(t, static_cast<int>(constraints.size()));
    if (static_cast<int>(nu.length()) <= needed) {
        throw PreconditionError("lgn(nu) = " + std::to_string(nu.length()) +
                                    " must exceed m_star = " + std::to_string(needed),
                                needed);
    }

    Tuple edge(static_cast<std::size_t>(k));
    for (std::size_t l = 0; l < nu.length(); ++l) {
        const Level lv = t.level(static_cast<int>(l));
        for (const auto& tuple : constraints) {
            edge[0] = nu[l];
            for (int j = 0; j < k - 1; ++j) {
                edge[j + 1] = tuple[j][l];
            }
            if (!lv.graph.is_edge(edge)) {
                throw PreconditionError("hypothesis fails at level " + std::to_string(l), static_cast<int>(l));
            }
        }
    }

    std::vector<int> path = nu.path();
    std::vector<Tuple> level_tuples(constraints.size(), Tuple(static_cast<std::size_t>(k - 1)));
    for (std::size_t l = nu.length(); l < target_len; ++l) {
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            for (int j = 0; j < k - 1; ++j) {
                level_tuples[i][j] = constraints[i][j][l];
            }
        }
        const auto w = extension_witness(t.level(static_cast<int>(l)).graph, level_tuples);
        if (!w) {
            throw ConsistencyError("no extension witness at level " + std::to_string(l) +
                                       "; the template overstates f there",
                                   static_cast<int>(l));
        }
        path.push_back(*w);
    }
    return LeafStem(std::move(path));
}

std::uint64_t enumerate_edge_partners(const Template& t, const LeafStem& rho, int depth,
                                      std::uint64_t budget) {
    if (depth < 0 || static_cast<int>(rho.length()) < depth) {
        throw InputError("enumerate_edge_partners needs lgn(rho) >= depth >= 0");
    }
    if (!in_tree(t, rho)) {
        throw InputError("rho is not in the tree of the template");
    }
    const int r = t.arity() - 1;
    std::uint64_t total = 1;
    std::uint64_t visited = 0;
    for (int l = 0; l < depth; ++l) {
        const Level lv = t.level(l);
        const int size = lv.graph.size();
        Tuple edge(static_cast<std::size_t>(r + 1), 0);
        edge[0] = rho[static_cast<std::size_t>(l)];
        std::uint64_t level_count = 0;
        for (;;) {
            if (++visited > budget) {
                // Every level has at least the all-equal partner, so the
                // partial product stays a lower bound.
                throw BudgetError("edge-partner enumeration budget exceeded at level " +
                                      std::to_string(l),
                                  total * std::max<std::uint64_t>(level_count, 1));
            }
            if (lv.graph.is_edge(edge)) {
                ++level_count;
            }
            int i = r;
            while (i >= 1 && edge[i] == size - 1) {
                edge[i] = 0;
                --i;
            }
            if (i < 1) {
                break;
            }
            ++edge[i];
        }
        if (total > std::numeric_limits<std::uint64_t>::max() / level_count) {
            throw BudgetError("edge-partner count overflows 64 bits", total);
        }
        total *= level_count;
    }
    return total;
}

} // namespace htpl
