#include "doctest.h"

#include <vector>

#include "tlab/hypergeom.hpp"
#include "tlab/subsets.hpp"

using namespace tlab;

TEST_CASE("pmf frozen examples and support") {
    CHECK(pmf(HypergeomParams{10, 4, 5}, 0) == BigRational(1, 42));  // C(6,5)/C(10,5)
    CHECK(pmf(HypergeomParams{10, 4, 5}, 5) == BigRational(0));      // above min(m,K)
    CHECK(pmf(HypergeomParams{10, 10, 7}, 7) == BigRational(1));     // all marked
    CHECK(pmf(HypergeomParams{10, 4, 5}, -1) == BigRational(0));
}

TEST_CASE("pmf sums to one for every parameter set up to N = 40") {
    const BigRational one(1);
    std::uint64_t bad = 0;
    for (unsigned long N = 1; N <= 40; ++N)
        for (unsigned long K = 0; K <= N; ++K)
            for (unsigned long m = 0; m <= N; ++m) {
                HypergeomParams p{N, K, m};
                BigRational total(0);
                for (long y = p.support_min(); y <= p.support_max(); ++y) total += pmf(p, y);
                if (!(total == one)) ++bad;
            }
    CHECK(bad == 0);
}

TEST_CASE("tail frozen examples, consistency with the pmf sum") {
    HypergeomParams p{10, 4, 5};
    CHECK(tail(p, 2) == BigRational(31, 42));  // 186/252
    CHECK(tail(p, 0) == BigRational(1));
    CHECK(tail(p, p.support_max() + 1) == BigRational(0));

    const auto tt = tail_table(p);
    for (long y = 0; y <= p.support_max() + 1; ++y) {
        CHECK(tt[static_cast<std::size_t>(y)] == tail(p, y));
        BigRational direct(0);
        for (long j = y; j <= p.support_max(); ++j) direct += pmf(p, j);
        CHECK(tt[static_cast<std::size_t>(y)] == direct);
    }
}

TEST_CASE("tail equals its descending-factorial rearrangement exactly") {
    // second route: P(Y >= y) = [C(K,y) C(m,y) / C(N,y)] *
    //   sum_{d} C(K-y, d) C(N-K, m-y-d) / (C(y+d, y) C(N-y, m-y))
    for (unsigned long N = 2; N <= 18; N += 2)
        for (unsigned long K = 1; K <= N; K += 2)
            for (unsigned long m = 1; m <= N; m += 2) {
                HypergeomParams p{N, K, m};
                for (long y = std::max(1L, p.support_min()); y <= p.support_max(); ++y) {
                    const unsigned long uy = static_cast<unsigned long>(y);
                    BigRational prefix =
                        BigRational(binom(K, uy) * binom(m, uy), binom(N, uy));
                    BigRational inner(0);
                    for (unsigned long d = 0; d <= std::min(m - uy, K - uy); ++d) {
                        BigInt num = binom(K - uy, d) * binom(N - K, m - uy - d);
                        BigInt den = binom(uy + d, uy) * binom(N - uy, m - uy);
                        if (den == 0) continue;
                        inner += BigRational(num, den);
                    }
                    CHECK(tail(p, y) == prefix * inner);
                }
            }
}

TEST_CASE("tail is 1 at and below the forced minimum") {
    HypergeomParams p{10, 8, 7};  // support starts at m+K-N = 5
    CHECK(p.support_min() == 5);
    CHECK(tail(p, 5) == BigRational(1));
    CHECK(tail(p, 6) < BigRational(1));
}

TEST_CASE("tail_bound frozen examples") {
    CHECK(tail_bound(HypergeomParams{10, 4, 5}, 2) == BigRational(8, 5));
    CHECK(tail_bound(HypergeomParams{10, 4, 5}, 0) == BigRational(1));
    CHECK(tail_bound(HypergeomParams{20, 5, 8}, 3) == BigRational(7, 8));
}

TEST_CASE("tail lemma sweep on a small grid") {
    auto rep = sweep_tail_lemma(12);
    CHECK(rep.checked > 0);
    CHECK(rep.violations == 0);
}

TEST_CASE("cov_disjoint frozen examples") {
    CHECK(cov_disjoint(6, 2, 2, 0) == BigRational(0));
    CHECK(cov_disjoint(6, 2, 2, 3) == BigRational(0));  // r beyond min(K,m)
    CHECK(cov_disjoint(6, 2, 2, 1) == BigRational(-7, 75));
    CHECK_THROWS_AS(cov_disjoint(5, 3, 2, 1), ValidationError);
}

TEST_CASE("cov_disjoint agrees with the conditioning route") {
    for (unsigned long N = 2; N <= 14; ++N)
        for (unsigned long K = 1; 2 * K <= N; ++K)
            for (unsigned long m = 0; m <= N; m += 2)
                for (unsigned long r = 0; r <= std::min(K, m) + 1; ++r)
                    CHECK(cov_disjoint(N, K, m, r) == cov_disjoint_conditioned(N, K, m, r));
}

TEST_CASE("cov_disjoint_all_r matches the single-r evaluations") {
    for (unsigned long N = 2; N <= 16; N += 2)
        for (unsigned long K = 1; 2 * K <= N; ++K)
            for (unsigned long m = 1; m <= N; m += 3) {
                auto all = cov_disjoint_all_r(N, K, m);
                for (std::size_t r = 0; r < all.size(); ++r)
                    CHECK(all[r] == cov_disjoint(N, K, m, static_cast<unsigned long>(r)));
            }
}

TEST_CASE("covariance lemma sweep on a small grid") {
    auto rep = sweep_covariance_lemma(12);
    CHECK(rep.violations == 0);
}

namespace {

// Exhaustive oracle: iterate every m-subset of the C(n,k) potential edges,
// evaluate both indicators on two explicit j-windows, average exactly.
BigRational cov_overlap_brute(unsigned n, unsigned j, unsigned ell, unsigned k, unsigned m,
                              unsigned r) {
    SubsetMask s1(n), s2(n);
    for (unsigned v = 0; v < j; ++v) s1.set(v);
    for (unsigned v = j - ell; v < 2 * j - ell; ++v) s2.set(v);

    auto edges = all_ksubsets(n, k);
    const unsigned total = static_cast<unsigned>(edges.size());
    BigInt both = 0, first = 0, second = 0, draws = 0;

    std::vector<unsigned> pick(m);
    auto rec = [&](auto&& self, unsigned start, unsigned depth) -> void {
        if (depth == m) {
            unsigned y1 = 0, y2 = 0;
            for (unsigned i = 0; i < m; ++i) {
                if (edges[pick[i]].is_subset_of(s1)) ++y1;
                if (edges[pick[i]].is_subset_of(s2)) ++y2;
            }
            draws += 1;
            if (y1 >= r) first += 1;
            if (y2 >= r) second += 1;
            if (y1 >= r && y2 >= r) both += 1;
            return;
        }
        for (unsigned i = start; i < total; ++i) {
            pick[depth] = i;
            self(self, i + 1, depth + 1);
        }
    };
    if (m == 0) {
        draws = 1;
        if (r == 0) { both = first = second = 1; }
    } else {
        rec(rec, 0, 0);
    }
    return BigRational(both, draws) -
           BigRational(first, draws) * BigRational(second, draws);
}

}  // namespace

TEST_CASE("cov_overlap identical windows reduce to Bernoulli variance") {
    // ell = j: Var(1{Y >= r}) = t (1 - t)
    auto cov = cov_overlap(6, 3, 3, 2, 3, 2);
    auto t = tail(HypergeomParams{15, 3, 3}, 2);
    CHECK(cov == t * (BigRational(1) - t));
}

TEST_CASE("cov_overlap is zero at r = 0") {
    CHECK(cov_overlap(6, 3, 2, 2, 3, 0) == BigRational(0));
}

TEST_CASE("cov_overlap matches the exhaustive edge-set oracle") {
    // pinned instance: C(15,3) = 455 draws
    CHECK(cov_overlap(6, 3, 2, 2, 3, 2) == cov_overlap_brute(6, 3, 2, 2, 3, 2));
    // a scan of small feasible tuples, both overlapping and disjoint classes
    for (unsigned n = 4; n <= 6; ++n)
        for (unsigned j = 2; j <= 3; ++j)
            for (unsigned ell = (2 * j > n) ? 2 * j - n : 0; ell <= j; ++ell)
                for (unsigned m = 0; m <= 5; m += 2)
                    for (unsigned r = 0; r <= 2; ++r) {
                        if (binom(n, 2) < m) continue;
                        CHECK(cov_overlap(n, j, ell, 2, m, r) ==
                              cov_overlap_brute(n, j, ell, 2, m, r));
                    }
}

TEST_CASE("cov_overlap below-k overlap is never positive") {
    const BigRational zero(0);
    for (unsigned n = 6; n <= 8; ++n)
        for (unsigned j = 2; j <= 3; ++j)
            for (unsigned ell = 0; ell < 2 && ell < j; ++ell) {
                if (2 * j - ell > n) continue;
                for (unsigned m = 1; m <= 6; ++m)
                    for (unsigned r = 1; r <= 3; ++r)
                        CHECK(cov_overlap(n, j, ell, 2, m, r) <= zero);
            }
}
