#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "tlab/exact.hpp"
#include "tlab/rng.hpp"
#include "tlab/stats.hpp"
#include "tlab/subsets.hpp"

namespace tlab {

// k-uniform hypergraph on {0..n-1}. Edges are kept strictly increasing in
// mask order, which makes duplicate detection and membership queries a
// binary search.
struct Hypergraph {
    unsigned n = 0;
    unsigned k = 0;
    std::vector<SubsetMask> edges;

    void validate() const {
        if (k > n) throw ValidationError("Hypergraph: k > n");
        for (const auto& e : edges) {
            if (e.width() != n) throw ValidationError("Hypergraph: edge width mismatch");
            if (e.popcount() != k) throw ValidationError("Hypergraph: edge size != k");
        }
        for (std::size_t i = 1; i < edges.size(); ++i)
            if (!(edges[i - 1] < edges[i]))
                throw ValidationError("Hypergraph: edges not strictly increasing");
    }

    std::size_t m() const { return edges.size(); }

    bool contains_edge(const SubsetMask& e) const {
        return std::binary_search(edges.begin(), edges.end(), e);
    }
};

// g = (1/r) * indicator of the edge set. S is in the upset of g exactly when
// S contains at least r edges.
struct GFunction {
    Hypergraph hypergraph;
    unsigned r = 1;

    void validate() const {
        if (r < 1) throw ValidationError("GFunction: r must be >= 1");
        hypergraph.validate();
    }
};

namespace detail {

// Colex rank of a k-subset {c_1 < ... < c_k} is sum C(c_i, i).
inline BigInt colex_rank(const std::vector<unsigned>& vs) {
    BigInt r = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) r += binom(vs[i], static_cast<unsigned long>(i + 1));
    return r;
}

// C(c, i) capped at UINT64_MAX. Exact below the cap, so comparisons against
// ranks below 2^63 decide identically to the exact value.
inline std::uint64_t binom_u64_saturated(unsigned c, unsigned i) {
    if (i > c) return 0;
    if (i > c - i) i = c - i;
    unsigned __int128 acc = 1;
    for (unsigned t = 0; t < i; ++t) {
        acc = acc * (c - t) / (t + 1);
        if (acc > static_cast<unsigned __int128>(~std::uint64_t{0}))
            return ~std::uint64_t{0};
    }
    return static_cast<std::uint64_t>(acc);
}

// Inverse of colex_rank for subsets of {0..n-1}.
inline SubsetMask colex_unrank(BigInt rank, unsigned n, unsigned k) {
    SubsetMask m(n);
    unsigned hi = n;
    for (unsigned i = k; i >= 1; --i) {
        // largest c with C(c, i) <= rank; search in [i-1, hi-1]
        unsigned lo = i - 1, up = hi - 1;
        while (lo < up) {
            unsigned mid = lo + (up - lo + 1) / 2;
            if (binom(mid, i) <= rank) lo = mid;
            else up = mid - 1;
        }
        m.set(lo);
        rank -= binom(lo, i);
        hi = lo;
    }
    return m;
}

inline SubsetMask colex_unrank_u64(std::uint64_t rank, unsigned n, unsigned k) {
    SubsetMask m(n);
    unsigned hi = n;
    for (unsigned i = k; i >= 1; --i) {
        unsigned lo = i - 1, up = hi - 1;
        while (lo < up) {
            unsigned mid = lo + (up - lo + 1) / 2;
            if (binom_u64_saturated(mid, i) <= rank) lo = mid;
            else up = mid - 1;
        }
        m.set(lo);
        rank -= binom_u64_saturated(lo, i);
        hi = lo;
    }
    return m;
}

// Uniform BigInt in [0, bound): draw ceil(bits/64) words, keep exactly
// `bits` random bits, reject values >= bound.
inline BigInt rand_below_big(CounterRng& rng, const BigInt& bound) {
    if (bound <= 0) throw ValidationError("rand_below_big: bound must be positive");
    if (bound.fits_ulong_p() && mpz_sizeinbase(bound.get_mpz_t(), 2) <= 63)
        return BigInt(static_cast<unsigned long>(rng.next_below(bound.get_ui())));
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    for (;;) {
        BigInt v = 0;
        for (std::size_t w = 0; w < words; ++w) {
            v <<= 64;
            v += BigInt(static_cast<unsigned long>(rng.next_u64()));
        }
        v >>= (words * 64 - bits);
        if (v < bound) return v;
    }
}

}  // namespace detail

// Uniform random m-subset of the C(n,k) possible edges, drawn by a partial
// Fisher-Yates over implicit ranks (hash-map backed, O(m) memory) and
// unranked colexicographically. Deterministic for a given SeedSpec.
inline Hypergraph sample_hnm(unsigned n, unsigned k, const BigInt& m, SeedSpec seed) {
    if (k > n) throw ValidationError("sample_hnm: k > n");
    const BigInt total = binom(n, k);
    if (m < 0 || m > total) throw CapacityError("sample_hnm: m exceeds C(n,k)");

    if (!m.fits_ulong_p()) throw CapacityError("sample_hnm: m too large to materialize");

    CounterRng rng(seed);
    Hypergraph h{n, k, {}};
    const unsigned long mm = m.get_ui();
    h.edges.reserve(mm);

    if (mpz_sizeinbase(total.get_mpz_t(), 2) <= 63) {
        // word-size ranks; draws consume the stream exactly like the wide path
        const std::uint64_t tot = total.get_ui();
        std::unordered_map<std::uint64_t, std::uint64_t> perm;
        perm.reserve(2 * mm);
        auto at = [&](std::uint64_t i) {
            auto it = perm.find(i);
            return it == perm.end() ? i : it->second;
        };
        for (std::uint64_t i = 0; i < mm; ++i) {
            std::uint64_t j = i + rng.next_below(tot - i);
            std::uint64_t rank_i = at(j);
            perm[j] = at(i);
            h.edges.push_back(detail::colex_unrank_u64(rank_i, n, k));
        }
    } else {
        std::map<BigInt, BigInt> perm;  // sparse view of the identity permutation
        auto at = [&](const BigInt& i) {
            auto it = perm.find(i);
            return it == perm.end() ? i : it->second;
        };
        for (BigInt i = 0; i < m; ++i) {
            BigInt j = i + detail::rand_below_big(rng, total - i);
            BigInt rank_i = at(j);
            perm[j] = at(i);
            h.edges.push_back(detail::colex_unrank(rank_i, n, k));
        }
    }
    std::sort(h.edges.begin(), h.edges.end());
    return h;
}

inline Hypergraph sample_hnm(unsigned n, unsigned k, unsigned long m, SeedSpec seed) {
    return sample_hnm(n, k, BigInt(m), seed);
}

inline constexpr unsigned long kHnqEnumerationLimit = 10'000'000UL;

// Binomial model: every k-subset appears independently with probability q.
// Costs one coin per potential edge, so C(n,k) is capped.
inline Hypergraph sample_hnq(unsigned n, unsigned k, double q, SeedSpec seed) {
    if (k > n) throw ValidationError("sample_hnq: k > n");
    if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("sample_hnq: q outside [0,1]");
    if (binom(n, k) > kHnqEnumerationLimit)
        throw CapacityError("sample_hnq: C(n,k) exceeds the per-edge enumeration limit");

    CounterRng rng(seed);
    Hypergraph h{n, k, {}};
    enumerate_ksubsets(n, k, [&](const SubsetMask& e) {
        if (rng.next_bernoulli(q)) h.edges.push_back(e);
    });
    // colex enumeration is already sorted in mask order
    return h;
}

// Number of edges contained in S, counted at most up to `cap`. Uses whichever
// of the two exact routes is cheaper: enumerate the k-subsets of S and binary
// search them, or scan the edge list with subset tests.
inline unsigned count_edges_within(const SubsetMask& S, const Hypergraph& h, unsigned cap) {
    const unsigned pc = S.popcount();
    if (pc < h.k || h.edges.empty()) return 0;

    // C(pc, k) without overflow worries, saturated at a small threshold.
    double subsets = 1.0;
    for (unsigned i = 0; i < h.k; ++i) subsets *= static_cast<double>(pc - i) / (i + 1);

    unsigned count = 0;
    if (pc <= kEnumerationWidthLimit && subsets <= 512.0) {
        const auto verts = S.vertices();
        std::vector<unsigned> pick(h.k);
        auto rec = [&](auto&& self, unsigned start, unsigned depth) -> bool {
            if (depth == h.k) {
                SubsetMask e(S.width());
                for (unsigned v : pick) e.set(v);
                if (h.contains_edge(e) && ++count >= cap) return false;
                return true;
            }
            for (unsigned i = start; i + (h.k - depth) <= verts.size() + 0u; ++i) {
                pick[depth] = verts[i];
                if (!self(self, i + 1, depth + 1)) return false;
            }
            return true;
        };
        if (h.k == 0) return 0;
        rec(rec, 0, 0);
        return count;
    }
    for (const auto& e : h.edges) {
        if (e.is_subset_of(S) && ++count >= cap) break;
    }
    return count;
}

// True iff S contains at least r edges of g's support.
inline bool member_upset_g(const SubsetMask& S, const GFunction& g) {
    if (S.width() != g.hypergraph.n) throw ValidationError("member_upset_g: width mismatch");
    if (g.r == 0) return true;
    return count_edges_within(S, g.hypergraph, g.r) >= g.r;
}

// --- conditional equivalence of the two models -------------------------------

enum class BucketStatus { pass, fail, inconclusive };

struct ConditionalBucket {
    unsigned m = 0;
    std::uint64_t samples = 0;
    std::uint64_t cells = 0;
    double expected_per_cell = 0.0;
    double chi2 = 0.0;
    unsigned df = 0;
    double p_value = 1.0;
    BucketStatus status = BucketStatus::inconclusive;
};

struct ConditionalReport {
    std::vector<ConditionalBucket> buckets;
    bool ok() const {
        for (const auto& b : buckets)
            if (b.status == BucketStatus::fail) return false;
        return true;
    }
};

inline constexpr unsigned long kConditionalEdgeLimit = 12;
inline constexpr double kMinExpectedPerCell = 5.0;

// Samples the binomial model repeatedly and, conditioned on each observed
// edge count m, compares the empirical distribution over edge sets against
// uniform by chi-square. Buckets with too few samples per cell are marked
// inconclusive rather than failed.
inline ConditionalReport conditional_equivalence_test(unsigned n, unsigned k, double q,
                                                      std::uint64_t trials, SeedSpec seed,
                                                      double alpha = 1e-3) {
    if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("conditional_equivalence_test: bad q");
    const BigInt total_big = binom(n, k);
    if (total_big > kConditionalEdgeLimit)
        throw CapacityError("conditional_equivalence_test: C(n,k) exceeds the outcome guard");
    const unsigned total = static_cast<unsigned>(total_big.get_ui());

    // one counter per possible edge set, keyed by the edge-index bitmask
    std::vector<std::uint64_t> counts(std::size_t{1} << total, 0);
    CounterRng rng(seed);
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::uint64_t outcome = 0;
        for (unsigned e = 0; e < total; ++e)
            if (rng.next_bernoulli(q)) outcome |= (std::uint64_t{1} << e);
        ++counts[outcome];
    }

    ConditionalReport rep;
    for (unsigned m = 0; m <= total; ++m) {
        ConditionalBucket b;
        b.m = m;
        b.cells = binom(total, m).get_ui();
        std::vector<std::uint64_t> obs;
        obs.reserve(b.cells);
        for (std::uint64_t mask = 0; mask < counts.size(); ++mask) {
            if (static_cast<unsigned>(std::popcount(mask)) != m) continue;
            obs.push_back(counts[mask]);
            b.samples += counts[mask];
        }
        b.expected_per_cell = b.cells ? static_cast<double>(b.samples) / b.cells : 0.0;
        if (b.cells <= 1) {
            b.status = BucketStatus::pass;  // a single outcome is trivially uniform
            b.df = 0;
            b.p_value = 1.0;
        } else if (b.expected_per_cell < kMinExpectedPerCell) {
            b.status = BucketStatus::inconclusive;
        } else {
            auto res = chi_square_uniform(obs, static_cast<double>(b.samples));
            b.chi2 = res.stat;
            b.df = res.df;
            b.p_value = res.p_value;
            b.status = (res.p_value >= alpha) ? BucketStatus::pass : BucketStatus::fail;
        }
        rep.buckets.push_back(b);
    }
    return rep;
}

// --- JSON interchange -------------------------------------------------------
//
// {"n": int, "k": int, "edges": [[int,...],...]} with vertices 0-based and
// ascending inside each edge, edges sorted lexicographically.

inline nlohmann::ordered_json hypergraph_to_json(const Hypergraph& h) {
    std::vector<std::vector<unsigned>> lists;
    lists.reserve(h.edges.size());
    for (const auto& e : h.edges) lists.push_back(e.vertices());
    std::sort(lists.begin(), lists.end());
    nlohmann::ordered_json j;
    j["n"] = h.n;
    j["k"] = h.k;
    j["edges"] = lists;
    return j;
}

inline Hypergraph hypergraph_from_json(const nlohmann::json& j) {
    Hypergraph h;
    try {
        h.n = j.at("n").get<unsigned>();
        h.k = j.at("k").get<unsigned>();
        for (const auto& lst : j.at("edges")) {
            SubsetMask e(h.n);
            unsigned count = 0;
            long prev = -1;
            for (const auto& v : lst) {
                long vi = v.get<long>();
                if (vi <= prev) throw ValidationError("hypergraph JSON: vertices must be ascending");
                if (vi < 0 || static_cast<unsigned long>(vi) >= h.n)
                    throw ValidationError("hypergraph JSON: vertex out of range");
                e.set(static_cast<unsigned>(vi));
                prev = vi;
                ++count;
            }
            if (count != h.k) throw ValidationError("hypergraph JSON: edge size != k");
            h.edges.push_back(e);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("hypergraph JSON: ") + ex.what());
    }
    std::sort(h.edges.begin(), h.edges.end());
    auto dup = std::adjacent_find(h.edges.begin(), h.edges.end());
    if (dup != h.edges.end()) throw ValidationError("hypergraph JSON: duplicate edge");
    h.validate();
    return h;
}

}  // namespace tlab
