#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "tlab/errors.hpp"

namespace tlab {

namespace detail {

// Regularized lower incomplete gamma P(a,x) by series, upper Q(a,x) by
// Lentz continued fraction; the usual split at x < a+1.
inline double gamma_p(double a, double x);

inline double gamma_q_cf(double a, double x) {
    const double eps = 1e-15;
    const double fpmin = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a, c = 1.0 / fpmin, d = 1.0 / b, h = d;
    for (int i = 1; i <= 10000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= eps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

inline double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw ValidationError("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw ValidationError("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

}  // namespace detail

// Survival function of the chi-square distribution: P(X >= stat) at df
// degrees of freedom.
inline double chi_square_pvalue(double stat, unsigned df) {
    if (df == 0) return 1.0;
    if (stat <= 0.0) return 1.0;
    return detail::gamma_q(df / 2.0, stat / 2.0);
}

struct ChiSquareResult {
    double stat = 0.0;
    unsigned df = 0;
    double p_value = 1.0;
};

// Pearson statistic of observed counts against given expected counts.
inline ChiSquareResult chi_square_test(const std::vector<double>& observed,
                                       const std::vector<double>& expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw ValidationError("chi_square_test: size mismatch");
    ChiSquareResult r;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) throw ValidationError("chi_square_test: nonpositive expected count");
        double d = observed[i] - expected[i];
        r.stat += d * d / expected[i];
    }
    r.df = static_cast<unsigned>(observed.size() - 1);
    r.p_value = chi_square_pvalue(r.stat, r.df);
    return r;
}

inline ChiSquareResult chi_square_uniform(const std::vector<std::uint64_t>& observed,
                                          double total) {
    std::vector<double> obs(observed.begin(), observed.end());
    std::vector<double> exp(observed.size(), total / static_cast<double>(observed.size()));
    return chi_square_test(obs, exp);
}

// Two-sided distribution-free confidence interval for a Bernoulli mean:
// phat +/- sqrt(ln(2/delta) / (2 trials)), clamped to [0,1].
struct HoeffdingInterval {
    double lo = 0.0, hi = 1.0;
};

inline HoeffdingInterval hoeffding_interval(double phat, std::uint64_t trials, double delta) {
    if (trials == 0) return {0.0, 1.0};
    if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("hoeffding_interval: bad delta");
    double eps = std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(trials)));
    return {std::max(0.0, phat - eps), std::min(1.0, phat + eps)};
}

namespace detail {
// log P(Bin(t, p) <= f), summed in a numerically tame way.
inline double binom_cdf(std::uint64_t f, std::uint64_t t, double p) {
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return f >= t ? 1.0 : 0.0;
    double acc = 0.0;
    double lp = std::log(p), lq = std::log1p(-p);
    for (std::uint64_t i = 0; i <= f && i <= t; ++i) {
        double lterm = std::lgamma(static_cast<double>(t) + 1) -
                       std::lgamma(static_cast<double>(i) + 1) -
                       std::lgamma(static_cast<double>(t - i) + 1) +
                       static_cast<double>(i) * lp + static_cast<double>(t - i) * lq;
        acc += std::exp(lterm);
    }
    return std::min(acc, 1.0);
}
}  // namespace detail

// Exact (Clopper-Pearson) binomial confidence bounds for f successes out of
// t trials, each one-sided at level alpha.
inline double clopper_pearson_upper(std::uint64_t f, std::uint64_t t, double alpha) {
    if (t == 0) return 1.0;
    if (f >= t) return 1.0;
    double lo = static_cast<double>(f) / static_cast<double>(t), hi = 1.0;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        if (detail::binom_cdf(f, t, mid) > alpha) lo = mid;
        else hi = mid;
    }
    return hi;
}

inline double clopper_pearson_lower(std::uint64_t f, std::uint64_t t, double alpha) {
    if (t == 0 || f == 0) return 0.0;
    double lo = 0.0, hi = static_cast<double>(f) / static_cast<double>(t);
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        // P(Bin(t, mid) >= f) = 1 - cdf(f-1)
        if (1.0 - detail::binom_cdf(f - 1, t, mid) < alpha) lo = mid;
        else hi = mid;
    }
    return lo;
}

struct RunningMoments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;

    void add(double x) {
        ++count;
        double n = static_cast<double>(count);
        double d = x - mean;
        double dn = d / n, dn2 = dn * dn;
        double t1 = d * dn * (n - 1);
        mean += dn;
        m4 += t1 * dn2 * (n * n - 3 * n + 3) + 6 * dn2 * m2 - 4 * dn * m3;
        m3 += t1 * dn * (n - 2) - 3 * dn * m2;
        m2 += t1;
    }

    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double fourth_central() const { return count > 0 ? m4 / static_cast<double>(count) : 0.0; }
    // standard error of the sample mean
    double se_mean() const {
        return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }
    // standard error of the sample variance, from the fourth central moment
    double se_variance() const {
        if (count < 2) return 0.0;
        double n = static_cast<double>(count);
        double s2 = variance();
        double v = (fourth_central() - s2 * s2 * (n - 3) / (n - 1)) / n;
        return v > 0 ? std::sqrt(v) : 0.0;
    }
};

}  // namespace tlab
