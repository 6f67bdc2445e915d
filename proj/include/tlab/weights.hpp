#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "tlab/cover.hpp"
#include "tlab/hypergeom.hpp"
#include "tlab/hypergraph.hpp"
#include "tlab/stats.hpp"

namespace tlab {

inline constexpr double kMcDelta = 1e-3;           // 99.9% two-sided Hoeffding
inline constexpr double kCertRelativeSlack = 1e-9;  // certificate comparisons
inline constexpr unsigned long kExactTailEdgeLimit = 10'000;  // C(n,k) cap for exact tails
inline constexpr unsigned kRestrictedExactWidthLimit = 24;
inline constexpr unsigned long kRestrictedExactCountLimit = 10'000'000;

enum class WeightKind { exact, closed_form, monte_carlo };

inline const char* to_string(WeightKind k) {
    switch (k) {
        case WeightKind::exact: return "exact";
        case WeightKind::closed_form: return "closed_form";
        case WeightKind::monte_carlo: return "monte_carlo";
    }
    return "?";
}

// A weight value with provenance. Monte Carlo estimates carry a two-sided
// 99.9% Hoeffding interval on the membership probability, scaled through
// the deterministic prefactor; other kinds have ci_low == value == ci_high.
struct WeightEstimate {
    double value = 0.0;
    WeightKind kind = WeightKind::exact;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t trials = 0;

    static WeightEstimate point(double v, WeightKind k) { return {v, k, v, v, 0}; }
};

// w(g, p) = m * p^k / r.
inline double weight_g(const GFunction& g, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("weight_g: p outside [0,1]");
    return static_cast<double>(g.hypergraph.m()) *
           std::pow(p, static_cast<double>(g.hypergraph.k)) / static_cast<double>(g.r);
}

// |G0| * p_eval^(k * ceil(r/2)), exact count, log-space power.
inline WeightEstimate weight_g0(const Cover& c, double p_eval) {
    if (c.g0_sets.empty()) return WeightEstimate::point(0.0, WeightKind::exact);
    LogScalar v = LogScalar::from_double(static_cast<double>(c.g0_sets.size())) *
                  LogScalar::from_double(p_eval).pow_int(c.k * c.matching_size());
    return WeightEstimate::point(v.to_double(), WeightKind::exact);
}

// C(n,j) * p_eval^j.
inline WeightEstimate weight_level_full(unsigned n, unsigned j, double p_eval) {
    if (j > n) throw ValidationError("weight_level_full: j > n");
    LogScalar v = log_binom(n, j) * LogScalar::from_double(p_eval).pow_int(j);
    return WeightEstimate::point(v.to_double(), WeightKind::closed_form);
}

// (number of j-subsets containing >= r edges) * p_eval^j, by enumeration.
inline WeightEstimate weight_level_restricted_exact(const Hypergraph& h, unsigned r, unsigned j,
                                                    double p_eval) {
    if (h.n > kRestrictedExactWidthLimit || binom(h.n, j) > kRestrictedExactCountLimit)
        throw CapacityError(
            "weight_level_restricted_exact: enumeration guard exceeded; use the Monte Carlo "
            "variant");
    std::uint64_t count = 0;
    enumerate_ksubsets(h.n, j, [&](const SubsetMask& S) {
        if (count_edges_within(S, h, r) >= r) ++count;
    });
    LogScalar v = LogScalar::from_double(static_cast<double>(count)) *
                  LogScalar::from_double(p_eval).pow_int(j);
    return WeightEstimate::point(v.to_double(), WeightKind::exact);
}

// Same quantity estimated from uniform random j-subsets.
inline WeightEstimate weight_level_restricted_mc(const Hypergraph& h, unsigned r, unsigned j,
                                                 double p_eval, std::uint64_t trials,
                                                 SeedSpec seed) {
    if (trials < 100) throw ValidationError("weight_level_restricted_mc: need trials >= 100");
    if (j > h.n) throw ValidationError("weight_level_restricted_mc: j > n");

    CounterRng rng(seed);
    std::uint64_t hits = 0;
    std::vector<unsigned> verts(h.n);
    for (unsigned i = 0; i < h.n; ++i) verts[i] = i;
    std::vector<std::pair<unsigned, unsigned>> swaps;
    swaps.reserve(j);
    for (std::uint64_t t = 0; t < trials; ++t) {
        // uniform j-subset by partial Fisher-Yates, undone after each trial
        swaps.clear();
        SubsetMask S(h.n);
        for (unsigned i = 0; i < j; ++i) {
            unsigned pick = i + static_cast<unsigned>(rng.next_below(h.n - i));
            std::swap(verts[i], verts[pick]);
            swaps.emplace_back(i, pick);
            S.set(verts[i]);
        }
        if (count_edges_within(S, h, r) >= r) ++hits;
        for (auto it = swaps.rbegin(); it != swaps.rend(); ++it)
            std::swap(verts[it->first], verts[it->second]);
    }

    const double phat = static_cast<double>(hits) / static_cast<double>(trials);
    const auto ci = hoeffding_interval(phat, trials, kMcDelta);
    LogScalar prefactor = log_binom(h.n, j) * LogScalar::from_double(p_eval).pow_int(j);
    const double pf = prefactor.to_double();
    WeightEstimate est;
    est.kind = WeightKind::monte_carlo;
    est.value = pf * phat;
    est.ci_low = pf * ci.lo;
    est.ci_high = pf * ci.hi;
    est.trials = trials;
    return est;
}

enum class WeightMode { automatic, exact, monte_carlo };

struct WeightPart {
    std::string part;  // "g0" or "level_<j>"
    unsigned j = 0;    // 0 for g0
    WeightEstimate estimate;
    double target = 0.0;  // per-part share of the total budget
};

struct WeightBreakdown {
    WeightEstimate total;
    std::vector<WeightPart> parts;
    double p_eval = 0.0;
    bool upset_empty = false;
};

// Total w(G, p/L) as the sum of the G0 part and every level part, with the
// per-part targets 2e^3/L for G0's slot and (2e^3/L)^j for level j.
inline WeightBreakdown weight_cover(const Hypergraph& h, unsigned r, const Cover& c,
                                    WeightMode mode = WeightMode::automatic,
                                    std::uint64_t trials = 10'000, SeedSpec seed = {}) {
    WeightBreakdown out;
    out.upset_empty = c.density.upset_empty;
    out.total = WeightEstimate::point(0.0, WeightKind::exact);
    if (c.density.upset_empty) return out;

    const double p_eval = c.density.p / c.L;
    out.p_eval = p_eval;

    auto add = [&](WeightPart part) {
        out.total.value += part.estimate.value;
        out.total.ci_low += part.estimate.ci_low;
        out.total.ci_high += part.estimate.ci_high;
        if (part.estimate.kind == WeightKind::monte_carlo)
            out.total.kind = WeightKind::monte_carlo;
        out.parts.push_back(std::move(part));
    };

    add(WeightPart{"g0", 0, weight_g0(c, p_eval), 2.0 * std::exp(3.0) / c.L});

    std::uint64_t task = 0;
    for (const auto& lv : c.levels) {
        WeightPart part;
        part.part = "level_" + std::to_string(lv.j);
        part.j = lv.j;
        part.target = std::pow(2.0 * std::exp(3.0) / c.L, static_cast<double>(lv.j));
        if (lv.j > c.n) {
            part.estimate = WeightEstimate::point(0.0, WeightKind::exact);  // no j-subsets
        } else if (lv.mode == LevelMode::full) {
            part.estimate = weight_level_full(c.n, lv.j, p_eval);
        } else {
            const bool can_exact = c.n <= kRestrictedExactWidthLimit &&
                                   binom(c.n, lv.j) <= kRestrictedExactCountLimit;
            if (mode == WeightMode::exact || (mode == WeightMode::automatic && can_exact)) {
                part.estimate = weight_level_restricted_exact(h, r, lv.j, p_eval);
            } else {
                part.estimate = weight_level_restricted_mc(
                    h, r, lv.j, p_eval, trials, SeedSpec{seed.master_seed, seed.task_index + task});
            }
        }
        ++task;
        add(std::move(part));
    }
    return out;
}

struct ExpectedWeight {
    double value = 0.0;
    bool bound_only = false;  // true when only the tail-bound route was available
    LogScalar log_value = LogScalar::zero();
};

// E[w(G_j, p/L)] = C(n,j) * P(Hyp(C(n,k), C(j,k), m) >= r) * (p/L)^j. The
// tail is exact rational within the edge-count guard; beyond it the
// closed-form tail majorant stands in and the result is flagged bound-only.
inline ExpectedWeight expected_weight_level(unsigned n, unsigned k, unsigned long m, unsigned r,
                                            unsigned j, double L) {
    if (j > n || k > j) throw ValidationError("expected_weight_level: need k <= j <= n");
    ExpectedWeight out;
    const BigInt total = binom(n, k);
    const BigInt inside = binom(j, k);
    if (BigInt(m) > total) throw ValidationError("expected_weight_level: m exceeds C(n,k)");
    if (inside < r || m < r) return out;  // tail beyond support

    const CriticalDensity cd = compute_p(r, m, k);
    if (cd.upset_empty) return out;
    LogScalar p_eval_pow = LogScalar::from_double(cd.p / L).pow_int(j);

    LogScalar tail_ls;
    if (total <= kExactTailEdgeLimit) {
        HypergeomParams hp{total.get_ui(), static_cast<unsigned long>(inside.get_ui()), m};
        BigRational t = tail(hp, static_cast<long>(r));
        if (t.sign() == 0) return out;
        tail_ls = LogScalar::from_rational(t);
    } else {
        // min(1, (K/N)^r * C(m,r)) in log space
        out.bound_only = true;
        double lg = static_cast<double>(r) * BigRational(inside, total).log_abs() +
                    log_binom(m, r).log_mag;
        tail_ls = LogScalar::from_log(std::min(0.0, lg));
    }
    out.log_value = log_binom(n, j) * tail_ls * p_eval_pow;
    out.value = out.log_value.to_double();
    return out;
}

// Sum over overlap classes of the pairwise covariances, without the
// (p/L)^{2j} scale: sum_ell C(n,j) C(j,ell) C(n-j, j-ell) cov_overlap(ell).
// This is the exact rational core of the level-weight variance.
inline BigRational variance_level_covariance_sum(unsigned n, unsigned k, unsigned long m,
                                                 unsigned r, unsigned j) {
    if (binom(n, k) > kExactTailEdgeLimit)
        throw CapacityError("variance_level_covariance_sum: C(n,k) exceeds the exact guard");
    if (j > n || k > j) throw ValidationError("variance_level_covariance_sum: need k <= j <= n");
    BigRational acc(0);
    for (unsigned ell = (2 * j > n) ? 2 * j - n : 0; ell <= j; ++ell) {
        BigRational cov = cov_overlap(n, j, ell, k, m, r);
        if (cov.sign() == 0) continue;
        BigInt pairs = binom(n, j) * binom(j, ell) * binom(n - j, j - ell);
        acc += BigRational(pairs) * cov;
    }
    return acc;
}

// Var(w(G_j, p/L)) exactly: the covariance sum scaled by (p/L)^{2j}.
inline double exact_variance_level(unsigned n, unsigned k, unsigned long m, unsigned r,
                                   unsigned j, double L) {
    BigRational core = variance_level_covariance_sum(n, k, m, r, j);
    if (core.sign() == 0) return 0.0;
    const CriticalDensity cd = compute_p(r, m, k);
    if (cd.upset_empty) return 0.0;
    LogScalar v = LogScalar::from_rational(core) *
                  LogScalar::from_double(cd.p / L).pow_int(2 * static_cast<long>(j));
    return v.to_double();
}

// --- certificates for the chain of weight claims ----------------------------

enum class ClaimId {
    G0_weight,
    Gj_small_np,
    Gj_expected,
    Gj_large_j,
    Gj_large_np,
    Gj_variance,
    Gj_chebyshev,
    pigeonhole_total,
};

inline const char* to_string(ClaimId id) {
    switch (id) {
        case ClaimId::G0_weight: return "G0_weight";
        case ClaimId::Gj_small_np: return "Gj_small_np";
        case ClaimId::Gj_expected: return "Gj_expected";
        case ClaimId::Gj_large_j: return "Gj_large_j";
        case ClaimId::Gj_large_np: return "Gj_large_np";
        case ClaimId::Gj_variance: return "Gj_variance";
        case ClaimId::Gj_chebyshev: return "Gj_chebyshev";
        case ClaimId::pigeonhole_total: return "pigeonhole_total";
    }
    return "?";
}

enum class CertStatus { passed, failed, not_applicable };

// One checked inequality: both sides are reported, and pass means
// lhs <= rhs * (1 + 1e-9), compared in the log domain.
struct ClaimCertificate {
    ClaimId id = ClaimId::G0_weight;
    unsigned j = 0;  // 0 for the aggregate claims
    LogScalar lhs = LogScalar::zero();
    LogScalar rhs = LogScalar::zero();
    bool in_regime = false;
    CertStatus status = CertStatus::not_applicable;
    std::string note;

    double lhs_value() const { return lhs.to_double(); }
    double rhs_value() const { return rhs.to_double(); }
};

namespace detail {

inline CertStatus judge(const LogScalar& lhs, const LogScalar& rhs, bool in_regime) {
    if (!in_regime) return CertStatus::not_applicable;
    if (lhs.sign <= 0) return CertStatus::passed;
    if (rhs.sign <= 0) return CertStatus::failed;
    return lhs.log_mag <= rhs.log_mag + std::log1p(kCertRelativeSlack) ? CertStatus::passed
                                                                       : CertStatus::failed;
}

// Smallest n = 2^e, e in [4,40], from which the closing asymptotic step
// (lnln(n)/n)^k * ln(n)^{lnln(n)} <= 1/ln(n) holds at every scanned point.
inline long asymptotic_threshold_scan(unsigned k) {
    long best = -1;
    for (int e = 4; e <= 40; ++e) {
        double n = std::ldexp(1.0, e);
        double ln = std::log(n), lnln = std::log(ln);
        double lhs = static_cast<double>(k) * (std::log(lnln) - std::log(n)) + lnln * std::log(ln);
        bool holds = lhs <= -std::log(ln);
        if (holds && best < 0) best = static_cast<long>(n);
        if (!holds) best = -1;
    }
    return best;
}

}  // namespace detail

// Evaluates every claim inequality for the instance (n, k, m, r) at covering
// constant L. Regime flags reflect each claim's hypotheses; out-of-regime
// rows are reported as not-applicable rather than silently dropped.
inline std::vector<ClaimCertificate> claim_certificates(unsigned n, unsigned k, unsigned long m,
                                                        unsigned r, double L) {
    if (k < 1 || r < 1 || k > n) throw ValidationError("claim_certificates: bad parameters");
    if (BigInt(m) > binom(n, k)) throw ValidationError("claim_certificates: m exceeds C(n,k)");
    if (L <= 0.0) throw ValidationError("claim_certificates: L must be positive");

    std::vector<ClaimCertificate> certs;
    const unsigned h_size = (r + 1) / 2;  // ceil(r/2)
    const unsigned j_lo = k + 1;
    const unsigned j_hi = k * r - h_size;

    if (r <= 1 || m < r) {
        for (ClaimId id : {ClaimId::G0_weight, ClaimId::Gj_small_np, ClaimId::Gj_expected,
                           ClaimId::Gj_large_j, ClaimId::Gj_large_np, ClaimId::Gj_variance,
                           ClaimId::Gj_chebyshev, ClaimId::pigeonhole_total}) {
            ClaimCertificate c;
            c.id = id;
            c.note = (m < r) ? "degenerate: m < r, upset of g is empty"
                             : "degenerate: r <= 1, cover is the support";
            certs.push_back(c);
        }
        return certs;
    }

    const double p = compute_p(r, m, k).p;
    const double np = static_cast<double>(n) * p;
    const double ln_n = std::log(static_cast<double>(n));
    const double lnln_n = std::log(ln_n);
    const LogScalar p_over_L = LogScalar::from_double(p / L);
    const LogScalar two_e_cubed_over_L = LogScalar::from_double(2.0 * std::exp(3.0) / L);

    {  // G0: C(m, h) (p/L)^{kh} <= (2e/L)^{kh}
        ClaimCertificate c;
        c.id = ClaimId::G0_weight;
        c.lhs = log_binom(m, h_size) * p_over_L.pow_int(static_cast<long>(k) * h_size);
        c.rhs = LogScalar::from_double(2.0 * std::exp(1.0) / L)
                    .pow_int(static_cast<long>(k) * h_size);
        c.in_regime = true;
        c.status = detail::judge(c.lhs, c.rhs, true);
        certs.push_back(c);
    }

    const long n_star = detail::asymptotic_threshold_scan(k);
    const std::string scan_note =
        n_star > 0 ? "asymptotic closing step holds for scanned n >= " + std::to_string(n_star)
                   : "asymptotic closing step did not stabilize in the scan range";

    for (unsigned j = j_lo; j <= j_hi && j_hi >= j_lo; ++j) {
        if (j > n) {
            // no j-subsets exist; every level claim is vacuous
            for (ClaimId id : {ClaimId::Gj_small_np, ClaimId::Gj_expected, ClaimId::Gj_large_j,
                               ClaimId::Gj_large_np, ClaimId::Gj_variance, ClaimId::Gj_chebyshev}) {
                ClaimCertificate c;
                c.id = id;
                c.j = j;
                c.note = "level empty: j > n";
                certs.push_back(c);
            }
            continue;
        }
        const double np_j = np / static_cast<double>(j);
        const bool small_regime = np_j <= kESquared;
        const bool large_regime = !small_regime;

        ExpectedWeight ew;
        bool ew_ready = false;
        auto expected = [&]() -> const ExpectedWeight& {
            if (!ew_ready) {
                ew = expected_weight_level(n, k, m, r, j, L);
                ew_ready = true;
            }
            return ew;
        };
        auto expected_ls = [&]() -> LogScalar { return expected().log_value; };
        const bool near_boundary = std::fabs(np_j - kESquared) <= kBoundaryGuardBand * kESquared;
        const std::string boundary_note = near_boundary ? "near the e^2 boundary" : "";

        {  // full level: C(n,j) (p/L)^j <= (e^3/L)^j
            ClaimCertificate c;
            c.id = ClaimId::Gj_small_np;
            c.j = j;
            c.lhs = log_binom(n, j) * p_over_L.pow_int(j);
            c.rhs = LogScalar::from_double(std::exp(3.0) / L).pow_int(j);
            c.in_regime = small_regime;
            c.note = boundary_note;
            c.status = detail::judge(c.lhs, c.rhs, c.in_regime);
            certs.push_back(c);
        }
        {  // E[w] <= (e^2/L)^j (e j / (n p))^{ceil(r/2)}
            ClaimCertificate c;
            c.id = ClaimId::Gj_expected;
            c.j = j;
            c.in_regime = large_regime;
            c.lhs = c.in_regime ? expected_ls() : LogScalar::zero();
            c.rhs = LogScalar::from_double(std::exp(2.0) / L).pow_int(j) *
                    LogScalar::from_double(std::exp(1.0) * static_cast<double>(j) / np)
                        .pow_int(h_size);
            c.note = boundary_note;
            if (c.in_regime && expected().bound_only) c.note = "lhs is the tail-bound estimate";
            c.status = detail::judge(c.lhs, c.rhs, c.in_regime);
            if (c.in_regime && expected().bound_only && c.status == CertStatus::failed) {
                c.status = CertStatus::not_applicable;
                c.note = "inconclusive: tail-bound lhs exceeds rhs, exact tail out of guard";
            }
            certs.push_back(c);
        }
        auto markov_cert = [&](ClaimId id, bool regime) {
            // Markov step checked end to end: E[w] / (2e^3/L)^j <= (1/2)^j / ln n
            ClaimCertificate c;
            c.id = id;
            c.j = j;
            c.in_regime = regime;
            c.lhs = regime ? expected_ls() / two_e_cubed_over_L.pow_int(j) : LogScalar::zero();
            c.rhs = LogScalar::from_double(0.5).pow_int(j) *
                    LogScalar::from_double(1.0 / ln_n);
            if (c.in_regime && expected().bound_only) c.note = "lhs uses the tail-bound estimate";
            c.status = detail::judge(c.lhs, c.rhs, c.in_regime);
            if (c.in_regime && expected().bound_only && c.status == CertStatus::failed) {
                c.status = CertStatus::not_applicable;
                c.note = "inconclusive: tail-bound lhs exceeds rhs, exact tail out of guard";
            }
            certs.push_back(c);
        };
        markov_cert(ClaimId::Gj_large_j,
                    large_regime && static_cast<double>(j) >= lnln_n);
        markov_cert(ClaimId::Gj_large_np, large_regime && np_j >= ln_n);

        // Chebyshev branch: e^2 < np/j < ln n, j <= lnln n, n past the scan
        const bool cheb_regime = large_regime && np_j < ln_n &&
                                 static_cast<double>(j) <= lnln_n &&
                                 (n_star > 0 && static_cast<long>(n) >= n_star);
        const bool var_computable = binom(n, k) <= kExactTailEdgeLimit;
        {
            ClaimCertificate c;
            c.id = ClaimId::Gj_variance;
            c.j = j;
            c.in_regime = cheb_regime && var_computable;
            if (c.in_regime) {
                c.lhs = LogScalar::from_double(exact_variance_level(n, k, m, r, j, L));
                c.rhs = LogScalar::from_double(2.0 * std::exp(1.0) / L).pow_int(j) *
                        expected_ls() * LogScalar::from_double(1.0 / ln_n);
            }
            c.note = scan_note + (cheb_regime && !var_computable
                                      ? "; exact variance out of guard"
                                      : "");
            c.status = detail::judge(c.lhs, c.rhs, c.in_regime);
            certs.push_back(c);
        }
        {
            ClaimCertificate c;
            c.id = ClaimId::Gj_chebyshev;
            c.j = j;
            c.in_regime = cheb_regime && var_computable;
            if (c.in_regime) {
                LogScalar var = LogScalar::from_double(exact_variance_level(n, k, m, r, j, L));
                LogScalar denom = LogScalar::from_double(2.0).pow_int(2 * static_cast<long>(j) - 2) *
                                  LogScalar::from_double(std::exp(3.0) / L).pow_int(2 * static_cast<long>(j));
                c.lhs = var / denom;
                c.rhs = LogScalar::from_double(0.5).pow_int(j) *
                        LogScalar::from_double(1.0 / ln_n);
            }
            c.note = scan_note;
            c.status = detail::judge(c.lhs, c.rhs, c.in_regime);
            certs.push_back(c);
        }
    }

    {  // total: (2e/L)^{kh} + sum_j (2e^3/L)^j <= (4e^3/L)^k
        ClaimCertificate c;
        c.id = ClaimId::pigeonhole_total;
        c.lhs = LogScalar::from_double(2.0 * std::exp(1.0) / L)
                    .pow_int(static_cast<long>(k) * h_size);
        for (unsigned j = j_lo; j <= j_hi && j_hi >= j_lo; ++j)
            c.lhs = c.lhs + two_e_cubed_over_L.pow_int(j);
        c.rhs = LogScalar::from_double(4.0 * std::exp(3.0) / L).pow_int(k);
        c.in_regime = true;
        c.status = detail::judge(c.lhs, c.rhs, true);
        certs.push_back(c);
    }
    return certs;
}

inline bool all_in_regime_pass(const std::vector<ClaimCertificate>& certs) {
    for (const auto& c : certs)
        if (c.status == CertStatus::failed) return false;
    return true;
}

inline nlohmann::ordered_json certificates_json(const std::vector<ClaimCertificate>& certs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : certs) {
        nlohmann::ordered_json e;
        e["claim_id"] = to_string(c.id);
        e["j"] = c.j;
        e["lhs"] = c.lhs_value();
        e["rhs"] = c.rhs_value();
        e["in_regime"] = c.in_regime;
        if (c.status == CertStatus::not_applicable) e["pass"] = nullptr;
        else e["pass"] = (c.status == CertStatus::passed);
        e["note"] = c.note;
        arr.push_back(e);
    }
    return arr;
}

inline nlohmann::ordered_json weight_breakdown_json(const WeightBreakdown& b) {
    nlohmann::ordered_json j;
    j["p_eval"] = b.p_eval;
    j["upset_empty"] = b.upset_empty;
    j["total"] = {{"value", b.total.value},
                  {"ci_low", b.total.ci_low},
                  {"ci_high", b.total.ci_high},
                  {"kind", to_string(b.total.kind)}};
    nlohmann::ordered_json parts = nlohmann::ordered_json::array();
    for (const auto& p : b.parts) {
        nlohmann::ordered_json e;
        e["part"] = p.part;
        e["value"] = p.estimate.value;
        e["ci_low"] = p.estimate.ci_low;
        e["ci_high"] = p.estimate.ci_high;
        e["kind"] = to_string(p.estimate.kind);
        e["target"] = p.target;
        parts.push_back(e);
    }
    j["parts"] = parts;
    return j;
}

}  // namespace tlab
