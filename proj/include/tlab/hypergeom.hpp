#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "tlab/errors.hpp"
#include "tlab/exact.hpp"

namespace tlab {

// Parameters of a hypergeometric (N, K, m) variable: m draws without
// replacement from N elements, K of which are marked.
struct HypergeomParams {
    unsigned long N = 0;
    unsigned long K = 0;
    unsigned long m = 0;

    void validate() const {
        if (K > N || m > N) throw ValidationError("HypergeomParams: need K <= N and m <= N");
    }
    long support_min() const {
        return std::max(0L, static_cast<long>(m) + static_cast<long>(K) - static_cast<long>(N));
    }
    long support_max() const { return static_cast<long>(std::min(m, K)); }
};

namespace detail {

// Row of binomials C(top, t) for t in [t_lo, t_hi]; entries with t < 0 or
// t > top are zero. Computed once at the first valid t and then updated
// incrementally: C(top, t+1) = C(top, t) * (top - t) / (t + 1).
inline std::vector<BigInt> binom_row(const BigInt& top, long t_lo, long t_hi) {
    std::vector<BigInt> row;
    if (t_hi < t_lo) return row;
    row.reserve(static_cast<std::size_t>(t_hi - t_lo + 1));
    for (long t = t_lo; t < 0 && t <= t_hi; ++t) row.emplace_back(0);
    if (static_cast<long>(row.size()) > t_hi - t_lo) return row;

    const long first = std::max(t_lo, 0L);
    BigInt cur;
    if (top.fits_ulong_p()) {
        mpz_bin_uiui(cur.get_mpz_t(), top.get_ui(), static_cast<unsigned long>(first));
    } else {
        mpz_bin_ui(cur.get_mpz_t(), top.get_mpz_t(), static_cast<unsigned long>(first));
    }
    row.push_back(cur);
    for (long t = first; t < t_hi; ++t) {
        BigInt next = row.back() * (top - t);
        mpz_divexact_ui(next.get_mpz_t(), next.get_mpz_t(), static_cast<unsigned long>(t + 1));
        row.push_back(next);
    }
    return row;
}

}  // namespace detail

// P(Y = y), exact. Zero outside the support.
inline BigRational pmf(const HypergeomParams& p, long y) {
    p.validate();
    if (y < p.support_min() || y > p.support_max()) return BigRational(0);
    const unsigned long uy = static_cast<unsigned long>(y);
    BigInt num = binom(p.K, uy) * binom(p.N - p.K, p.m - uy);
    return BigRational(num, binom(p.N, p.m));
}

// All upper tails at once: result[y] = P(Y >= y) for y in [0, support_max()+1].
// One shared denominator C(N,m); the numerators are suffix sums.
inline std::vector<BigRational> tail_table(const HypergeomParams& p) {
    p.validate();
    const long lo = p.support_min(), hi = p.support_max();
    const BigInt den = binom(p.N, p.m);

    // numerators over the support
    std::vector<BigInt> num(static_cast<std::size_t>(hi - lo + 1));
    const auto rowK = detail::binom_row(BigInt(p.K), lo, hi);
    const auto rowR = detail::binom_row(BigInt(p.N - p.K),
                                        static_cast<long>(p.m) - hi, static_cast<long>(p.m) - lo);
    for (long y = lo; y <= hi; ++y)
        num[static_cast<std::size_t>(y - lo)] =
            rowK[static_cast<std::size_t>(y - lo)] * rowR[static_cast<std::size_t>(hi - y)];

    std::vector<BigRational> tails(static_cast<std::size_t>(hi + 2));
    BigInt suffix = 0;
    for (long y = hi; y >= 0; --y) {
        if (y >= lo) suffix += num[static_cast<std::size_t>(y - lo)];
        tails[static_cast<std::size_t>(y)] = BigRational(suffix, den);
    }
    tails[static_cast<std::size_t>(hi + 1)] = BigRational(0);
    return tails;
}

// P(Y >= y), exact. 1 for y at or below the forced minimum, 0 past the support.
inline BigRational tail(const HypergeomParams& p, long y) {
    p.validate();
    if (y < 0) throw ValidationError("tail: y must be nonnegative");
    const long hi = p.support_max();
    if (y > hi) return BigRational(0);
    if (y <= p.support_min()) return BigRational(1);
    BigInt suffix = 0;
    const auto rowK = detail::binom_row(BigInt(p.K), y, hi);
    const auto rowR = detail::binom_row(BigInt(p.N - p.K),
                                        static_cast<long>(p.m) - hi, static_cast<long>(p.m) - y);
    for (long j = y; j <= hi; ++j)
        suffix += rowK[static_cast<std::size_t>(j - y)] * rowR[static_cast<std::size_t>(hi - j)];
    return BigRational(suffix, binom(p.N, p.m));
}

// The closed-form tail majorant (K/N)^y * C(m,y), exact.
inline BigRational tail_bound(const HypergeomParams& p, long y) {
    p.validate();
    if (p.N < 1) throw ValidationError("tail_bound: N must be >= 1");
    if (y < 0 || y > p.support_max())
        throw ValidationError("tail_bound: need 0 <= y <= min(m,K)");
    BigRational ratio(BigInt(p.K), BigInt(p.N));
    return ratio.pow_uint(static_cast<unsigned long>(y)) *
           BigRational(binom(p.m, static_cast<unsigned long>(y)));
}

// Potential-edge categories for two windows observed by the same draw of m
// edges: |only in window 1|, |only in window 2|, |shared|, rest implicit.
struct OverlapParams {
    BigInt total_edges;
    unsigned long edges_only_1 = 0;
    unsigned long edges_only_2 = 0;
    unsigned long edges_shared = 0;
    unsigned long m = 0;

    BigInt rest() const {
        return total_edges - edges_only_1 - edges_only_2 - edges_shared;
    }
    void validate() const {
        if (rest() < 0)
            throw ValidationError("OverlapParams: categories exceed total_edges");
        if (BigInt(m) > total_edges)
            throw ValidationError("OverlapParams: m exceeds total_edges");
    }
};

// Cov(1{Y1 >= r}, 1{Y2 >= r}) where Y1 = |draw in window 1| + |draw shared|
// and Y2 likewise; exact, via the trivariate hypergeometric joint law over
// (only-1, only-2, shared) counts.
inline BigRational cov_from_categories(const OverlapParams& op, unsigned long r) {
    op.validate();
    const unsigned long K1 = op.edges_only_1, K2 = op.edges_only_2, Ks = op.edges_shared;
    const BigInt rest = op.rest();
    const BigInt den = [&] {
        BigInt d;
        mpz_bin_ui(d.get_mpz_t(), op.total_edges.get_mpz_t(), op.m);
        return d;
    }();

    const unsigned long c_hi = std::min<unsigned long>(Ks, op.m);
    const auto rowS = detail::binom_row(BigInt(Ks), 0, static_cast<long>(c_hi));

    BigInt joint_num = 0;
    for (unsigned long c = 0; c <= c_hi; ++c) {
        const unsigned long left = op.m - c;
        const unsigned long a_lo = (c >= r) ? 0 : r - c;
        const unsigned long b_lo = a_lo;
        const unsigned long a_hi = std::min<unsigned long>(K1, left);
        if (a_lo > a_hi) continue;
        const auto rowA = detail::binom_row(BigInt(K1), static_cast<long>(a_lo),
                                            static_cast<long>(a_hi));
        for (unsigned long a = a_lo; a <= a_hi; ++a) {
            const unsigned long left2 = left - a;
            const unsigned long b_hi = std::min<unsigned long>(K2, left2);
            if (b_lo > b_hi) continue;
            const auto rowB = detail::binom_row(BigInt(K2), static_cast<long>(b_lo),
                                                static_cast<long>(b_hi));
            // rest must absorb m - a - b - c draws
            const auto rowRest = detail::binom_row(rest,
                                                   static_cast<long>(left2) - static_cast<long>(b_hi),
                                                   static_cast<long>(left2) - static_cast<long>(b_lo));
            BigInt inner = 0;
            for (unsigned long b = b_lo; b <= b_hi; ++b) {
                const BigInt& cr = rowRest[static_cast<std::size_t>(b_hi - b)];
                if (cr == 0) continue;
                inner += rowB[static_cast<std::size_t>(b - b_lo)] * cr;
            }
            joint_num += rowS[c] * rowA[static_cast<std::size_t>(a - a_lo)] * inner;
        }
    }
    BigRational joint(joint_num, den);

    // marginal tails of Y1 and Y2
    auto marginal_tail = [&](unsigned long own) -> BigRational {
        if (BigInt(own) + Ks > op.total_edges || !op.total_edges.fits_ulong_p()) {
            // wide population: sum the bivariate law directly (rare path)
            BigInt num = 0;
            const unsigned long y_hi = std::min<unsigned long>(own + Ks, op.m);
            const auto rowOwn = detail::binom_row(BigInt(own) + Ks, 0, static_cast<long>(y_hi));
            const auto rowOther = detail::binom_row(op.total_edges - own - Ks,
                                                    static_cast<long>(op.m) - static_cast<long>(y_hi),
                                                    static_cast<long>(op.m));
            for (unsigned long y = (r > y_hi ? y_hi + 1 : r); y <= y_hi; ++y)
                num += rowOwn[y] * rowOther[static_cast<std::size_t>(y_hi - y)];
            return BigRational(num, den);
        }
        HypergeomParams hp{op.total_edges.get_ui(), own + Ks, op.m};
        return tail(hp, static_cast<long>(r));
    };
    BigRational t1 = marginal_tail(K1);
    BigRational t2 = (K2 == K1) ? t1 : marginal_tail(K2);
    return joint - t1 * t2;
}

// Disjoint windows of size K each inside a population of N, m draws without
// replacement. Exact covariance of the two threshold indicators; the
// covariance lemma says this is never positive.
inline BigRational cov_disjoint(unsigned long N, unsigned long K, unsigned long m,
                                unsigned long r) {
    if (2 * K > N) throw ValidationError("cov_disjoint: need 2K <= N");
    if (m > N) throw ValidationError("cov_disjoint: need m <= N");
    OverlapParams op{BigInt(N), K, K, 0, m};
    return cov_from_categories(op, r);
}

// Same covariance for every r in [0, min(K,m)] at once, via 2D suffix sums
// of the joint numerators. Used by the exhaustive lemma sweeps.
inline std::vector<BigRational> cov_disjoint_all_r(unsigned long N, unsigned long K,
                                                   unsigned long m) {
    if (2 * K > N) throw ValidationError("cov_disjoint_all_r: need 2K <= N");
    if (m > N) throw ValidationError("cov_disjoint_all_r: need m <= N");
    const unsigned long top = std::min(K, m);
    const BigInt den = binom(N, m);

    const auto rowK = detail::binom_row(BigInt(K), 0, static_cast<long>(top));
    // T[a][b] = C(K,a) C(K,b) C(N-2K, m-a-b)
    std::vector<std::vector<BigInt>> suffix(top + 2, std::vector<BigInt>(top + 2, BigInt(0)));
    for (long a = static_cast<long>(top); a >= 0; --a) {
        const auto rowRest = detail::binom_row(BigInt(N - 2 * K),
                                               static_cast<long>(m) - a - static_cast<long>(top),
                                               static_cast<long>(m) - a);
        for (long b = static_cast<long>(top); b >= 0; --b) {
            BigInt t = rowK[static_cast<std::size_t>(a)] * rowK[static_cast<std::size_t>(b)] *
                       rowRest[static_cast<std::size_t>(top - b)];
            suffix[a][b] = t + suffix[a + 1][b] + suffix[a][b + 1] - suffix[a + 1][b + 1];
        }
    }

    HypergeomParams hp{N, K, m};
    const auto tails = tail_table(hp);

    std::vector<BigRational> out(top + 1);
    for (unsigned long r = 0; r <= top; ++r) {
        BigRational joint(suffix[r][r], den);
        out[r] = joint - tails[r] * tails[r];
    }
    return out;
}

// Alternative route for the disjoint case, following the two-step draw:
// E[1{Y1>=r} 1{Y2>=r}] = sum_t P(Y1 = t) P(Y2 >= r | Y1 = t) with
// Y2 | Y1 = t distributed hypergeometric(N-K, K, m-t). Kept as an
// independent oracle for cov_disjoint.
inline BigRational cov_disjoint_conditioned(unsigned long N, unsigned long K, unsigned long m,
                                            unsigned long r) {
    if (2 * K > N) throw ValidationError("cov_disjoint_conditioned: need 2K <= N");
    if (m > N) throw ValidationError("cov_disjoint_conditioned: need m <= N");
    HypergeomParams outer{N, K, m};
    BigRational joint(0);
    for (long t = std::max(outer.support_min(), static_cast<long>(r));
         t <= outer.support_max(); ++t) {
        BigRational pt = pmf(outer, t);
        if (pt.sign() == 0) continue;
        HypergeomParams inner{N - K, K, m - static_cast<unsigned long>(t)};
        joint += pt * tail(inner, static_cast<long>(r));
    }
    BigRational t1 = tail(outer, static_cast<long>(r));
    return joint - t1 * t1;
}

struct SweepReport {
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    std::string first_violation;

    bool ok() const { return violations == 0; }
};

// Exhaustive check of tail(y) <= (K/N)^y C(m,y) over every (N, K, m, y) with
// N <= max_N, K, m <= N, 0 <= y <= min(m, K). Exact rational comparisons.
inline SweepReport sweep_tail_lemma(unsigned long max_N) {
    SweepReport rep;
    for (unsigned long N = 1; N <= max_N; ++N)
        for (unsigned long K = 0; K <= N; ++K)
            for (unsigned long m = 0; m <= N; ++m) {
                HypergeomParams p{N, K, m};
                const auto tails = tail_table(p);
                for (long y = 0; y <= p.support_max(); ++y) {
                    ++rep.checked;
                    if (tails[static_cast<std::size_t>(y)] > tail_bound(p, y)) {
                        ++rep.violations;
                        if (rep.first_violation.empty())
                            rep.first_violation = "N=" + std::to_string(N) + " K=" +
                                                  std::to_string(K) + " m=" + std::to_string(m) +
                                                  " y=" + std::to_string(y);
                    }
                }
            }
    return rep;
}

// Exhaustive check of cov_disjoint <= 0 over every (N, K, m, r) with
// N <= max_N, 2K <= N, m <= N, 0 <= r <= min(K, m). Exact rational signs.
inline SweepReport sweep_covariance_lemma(unsigned long max_N) {
    SweepReport rep;
    const BigRational zero(0);
    for (unsigned long N = 1; N <= max_N; ++N)
        for (unsigned long K = 0; 2 * K <= N; ++K)
            for (unsigned long m = 0; m <= N; ++m) {
                const auto covs = cov_disjoint_all_r(N, K, m);
                for (std::size_t r = 0; r < covs.size(); ++r) {
                    ++rep.checked;
                    if (covs[r] > zero) {
                        ++rep.violations;
                        if (rep.first_violation.empty())
                            rep.first_violation = "N=" + std::to_string(N) + " K=" +
                                                  std::to_string(K) + " m=" + std::to_string(m) +
                                                  " r=" + std::to_string(r);
                    }
                }
            }
    return rep;
}

// Covariance of the "at least r edges inside" indicators for two j-vertex
// windows sharing ell vertices, in a k-uniform world on n vertices with m
// random edges. ell < k degenerates to zero shared potential edges.
inline BigRational cov_overlap(unsigned long n, unsigned long j, unsigned long ell,
                               unsigned long k, unsigned long m, unsigned long r) {
    if (!(ell <= j && j <= n)) throw ValidationError("cov_overlap: need ell <= j <= n");
    if (k < 1) throw ValidationError("cov_overlap: k must be >= 1");
    if (2 * j - ell > n)
        throw ValidationError("cov_overlap: two j-sets with ell common vertices need 2j-ell <= n");
    const BigInt total = binom(n, k);
    if (BigInt(m) > total) throw ValidationError("cov_overlap: m exceeds C(n,k)");

    const BigInt inside = binom(j, k);
    const BigInt shared = binom(ell, k);  // zero when ell < k
    if (!inside.fits_ulong_p())
        throw CapacityError("cov_overlap: C(j,k) too large for exact enumeration");
    const unsigned long own = BigInt(inside - shared).get_ui();
    OverlapParams op{total, own, own, static_cast<unsigned long>(shared.get_ui()), m};
    return cov_from_categories(op, r);
}

}  // namespace tlab
