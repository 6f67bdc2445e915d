#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <type_traits>
#include <vector>

#include "tlab/errors.hpp"
#include "tlab/exact.hpp"

namespace tlab {

// A subset of the ground set {0,...,n-1} as a fixed-width bit vector.
// Word 0 holds elements 0..63. Ordering compares the numeric value of the
// bit string ("mask order"), which on equal-size subsets is colex order.
class SubsetMask {
public:
    SubsetMask() = default;
    explicit SubsetMask(unsigned width)
        : n_(width), words_((width + 63) / 64, 0) {}

    static SubsetMask from_vertices(unsigned width, const std::vector<unsigned>& vs) {
        SubsetMask m(width);
        for (unsigned v : vs) m.set(v);
        return m;
    }

    unsigned width() const { return n_; }

    void set(unsigned i) {
        if (i >= n_) throw ValidationError("SubsetMask::set: index out of range");
        words_[i >> 6] |= (1ULL << (i & 63));
    }
    void reset(unsigned i) {
        if (i >= n_) throw ValidationError("SubsetMask::reset: index out of range");
        words_[i >> 6] &= ~(1ULL << (i & 63));
    }
    bool test(unsigned i) const {
        if (i >= n_) return false;
        return (words_[i >> 6] >> (i & 63)) & 1ULL;
    }

    unsigned popcount() const {
        unsigned c = 0;
        for (std::uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    bool empty() const {
        for (std::uint64_t w : words_) if (w) return false;
        return true;
    }

    bool is_subset_of(const SubsetMask& o) const {
        check_width(o);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool intersects(const SubsetMask& o) const {
        check_width(o);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    SubsetMask& operator|=(const SubsetMask& o) {
        check_width(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    SubsetMask& operator&=(const SubsetMask& o) {
        check_width(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    friend SubsetMask operator|(SubsetMask a, const SubsetMask& b) { return a |= b; }
    friend SubsetMask operator&(SubsetMask a, const SubsetMask& b) { return a &= b; }

    friend bool operator==(const SubsetMask& a, const SubsetMask& b) {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }

    // Numeric order of the bit string; most significant word decides.
    friend std::strong_ordering operator<=>(const SubsetMask& a, const SubsetMask& b) {
        if (a.n_ != b.n_) return a.n_ <=> b.n_;
        for (std::size_t i = a.words_.size(); i-- > 0;) {
            if (a.words_[i] != b.words_[i]) return a.words_[i] <=> b.words_[i];
        }
        return std::strong_ordering::equal;
    }

    std::vector<unsigned> vertices() const {
        std::vector<unsigned> out;
        out.reserve(popcount());
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                unsigned b = static_cast<unsigned>(std::countr_zero(w));
                out.push_back(static_cast<unsigned>(wi * 64 + b));
                w &= w - 1;
            }
        }
        return out;
    }

    std::size_t hash() const {
        std::size_t h = 0x9E3779B97F4A7C15ULL ^ n_;
        for (std::uint64_t w : words_) h = (h ^ w) * 0x100000001B3ULL;
        return h;
    }

    // Single-word view, valid when width <= 64.
    std::uint64_t word0() const { return words_.empty() ? 0 : words_[0]; }

private:
    unsigned n_ = 0;
    std::vector<std::uint64_t> words_;

    void check_width(const SubsetMask& o) const {
        if (n_ != o.n_) throw ValidationError("SubsetMask: width mismatch");
    }
};

struct SubsetMaskHash {
    std::size_t operator()(const SubsetMask& m) const { return m.hash(); }
};

// Pairwise-disjoint equal-size edges; the union has popcount k * |edges|.
struct Matching {
    std::vector<SubsetMask> edges;
};

inline SubsetMask union_of(const Matching& m, unsigned width) {
    SubsetMask u(width);
    for (const auto& e : m.edges) u |= e;
    return u;
}

inline constexpr unsigned kEnumerationWidthLimit = 64;

// Streams the k-subsets of {0..n-1} in colex order (= increasing numeric
// mask value) via Gosper's hack. Restartable; limited to single-word widths.
class KSubsetStream {
public:
    KSubsetStream(unsigned n, unsigned k) : n_(n), k_(k) {
        if (n > kEnumerationWidthLimit)
            throw CapacityError("enumerate_ksubsets: n exceeds the 64-element enumeration mode");
        if (k > n) throw ValidationError("enumerate_ksubsets: k > n");
        reset();
    }

    void reset() {
        cur_ = (k_ == 0) ? 0 : (~0ULL >> (64 - k_));
        done_ = false;
    }

    bool done() const { return done_; }

    // Current subset as a raw word; advance with next().
    std::uint64_t value() const { return cur_; }

    SubsetMask value_mask() const {
        SubsetMask m(n_);
        std::uint64_t w = cur_;
        while (w) {
            m.set(static_cast<unsigned>(std::countr_zero(w)));
            w &= w - 1;
        }
        return m;
    }

    void next() {
        if (k_ == 0 || k_ == n_) { done_ = true; return; }
        std::uint64_t v = cur_;
        std::uint64_t t = v | (v - 1);
        // two shifts: countr_zero(v) + 1 can reach 64, one shift would be UB
        std::uint64_t w =
            (t + 1) | ((((~t & (t + 1)) - 1) >> std::countr_zero(v)) >> 1);
        if (n_ < 64) {
            if (w >= (1ULL << n_)) { done_ = true; return; }
        } else {
            if (w < v) { done_ = true; return; }  // wrapped past the top
        }
        cur_ = w;
    }

private:
    unsigned n_, k_;
    std::uint64_t cur_ = 0;
    bool done_ = false;
};

// Visits each k-subset once, in colex order. Exactly C(n,k) calls.
template <typename Fn>
void enumerate_ksubsets(unsigned n, unsigned k, Fn&& visit) {
    KSubsetStream s(n, k);
    while (!s.done()) {
        visit(s.value_mask());
        s.next();
    }
}

inline std::vector<SubsetMask> all_ksubsets(unsigned n, unsigned k) {
    std::vector<SubsetMask> out;
    enumerate_ksubsets(n, k, [&](const SubsetMask& m) { out.push_back(m); });
    return out;
}

inline constexpr unsigned long long kDefaultNodeBudget = 100'000'000ULL;

// Enumerates every s-subset of `edges` whose members are pairwise disjoint,
// as a sorted index combination, by backtracking that prunes on the first
// conflict. A visitor returning bool may return false to stop early. Each
// recursion step counts one node against the budget.
//
// Returns the number of matchings visited.
template <typename Fn>
unsigned long long enumerate_matchings(const std::vector<SubsetMask>& edges, unsigned s,
                                       Fn&& visit,
                                       unsigned long long node_budget = kDefaultNodeBudget) {
    if (!edges.empty()) {
        unsigned k = edges.front().popcount();
        if (k < 1) throw ValidationError("enumerate_matchings: edges must be nonempty sets");
        for (const auto& e : edges)
            if (e.popcount() != k) throw ValidationError("enumerate_matchings: unequal edge sizes");
    }
    auto call = [&](const std::vector<unsigned>& ix) -> bool {
        if constexpr (std::is_void_v<decltype(visit(ix))>) {
            visit(ix);
            return true;
        } else {
            return visit(ix);
        }
    };

    unsigned long long nodes = 0, found = 0;
    std::vector<unsigned> picked;
    picked.reserve(s);
    bool stop = false;

    const unsigned width = edges.empty() ? 0 : edges.front().width();
    SubsetMask used(width);

    auto rec = [&](auto&& self, unsigned start) -> void {
        if (stop) return;
        if (picked.size() == s) {
            ++found;
            if (!call(picked)) stop = true;
            return;
        }
        for (unsigned i = start; i < edges.size(); ++i) {
            if (edges.size() - i < s - picked.size()) break;
            if (++nodes > node_budget)
                throw BudgetError("enumerate_matchings: node budget exceeded", nodes);
            if (used.intersects(edges[i])) continue;
            used |= edges[i];
            picked.push_back(i);
            self(self, i + 1);
            picked.pop_back();
            for (unsigned v : edges[i].vertices()) used.reset(v);
            if (stop) return;
        }
    };

    if (s == 0) {
        call({});
        return 1;
    }
    rec(rec, 0);
    return found;
}

}  // namespace tlab
