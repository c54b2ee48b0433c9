#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace htpl {

// Fixed-universe bitset over the vertices 0..universe-1 of one level.
class VertexSet {
public:
    VertexSet() = default;

    explicit VertexSet(int universe, bool full = false)
        : universe_(universe), words_((static_cast<std::size_t>(universe) + 63) / 64, 0) {
        if (full) {
            fill();
        }
    }

    int universe() const noexcept { return universe_; }

    void set(int v) { words_[v >> 6] |= bit(v); }
    void reset(int v) { words_[v >> 6] &= ~bit(v); }
    bool test(int v) const { return (words_[v >> 6] & bit(v)) != 0; }

    void fill() {
        for (auto& w : words_) {
            w = ~std::uint64_t{0};
        }
        trim();
    }

    VertexSet& operator&=(const VertexSet& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            words_[i] &= other.words_[i];
        }
        return *this;
    }

    friend VertexSet operator&(VertexSet a, const VertexSet& b) {
        a &= b;
        return a;
    }

    bool none() const {
        for (auto w : words_) {
            if (w != 0) {
                return false;
            }
        }
        return true;
    }

    bool any() const { return !none(); }

    int count() const {
        int c = 0;
        for (auto w : words_) {
            c += std::popcount(w);
        }
        return c;
    }

    /// Least member, or -1 when empty.
    int first() const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] != 0) {
                return static_cast<int>(i * 64) + std::countr_zero(words_[i]);
            }
        }
        return -1;
    }

    bool is_subset_of(const VertexSet& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if ((words_[i] & ~other.words_[i]) != 0) {
                return false;
            }
        }
        return true;
    }

    std::vector<int> members() const {
        std::vector<int> out;
        for (int v = 0; v < universe_; ++v) {
            if (test(v)) {
                out.push_back(v);
            }
        }
        return out;
    }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;

private:
    static std::uint64_t bit(int v) { return std::uint64_t{1} << (v & 63); }

    void trim() {
        if (universe_ % 64 != 0 && !words_.empty()) {
            words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
        }
    }

    int universe_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace htpl
