#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

#include "tlab/errors.hpp"

namespace tlab {

using BigInt = mpz_class;

// Exact rational scalar. Stored canonical: denominator > 0, lowest terms.
// All comparisons are exact; this is the currency for probability values
// and for inequality certificates that must not depend on rounding.
class BigRational {
public:
    BigRational() : v_(0) {}
    BigRational(long num) : v_(num) {}
    BigRational(const BigInt& num) : v_(num) {}
    BigRational(const BigInt& num, const BigInt& den) : v_(num, den) {
        if (den == 0) throw ValidationError("BigRational: zero denominator");
        v_.canonicalize();
    }
    BigRational(long num, unsigned long den) : v_(num, den) {
        if (den == 0) throw ValidationError("BigRational: zero denominator");
        v_.canonicalize();
    }

    BigInt numerator() const { return v_.get_num(); }
    BigInt denominator() const { return v_.get_den(); }

    BigRational& operator+=(const BigRational& o) { v_ += o.v_; return *this; }
    BigRational& operator-=(const BigRational& o) { v_ -= o.v_; return *this; }
    BigRational& operator*=(const BigRational& o) { v_ *= o.v_; return *this; }
    BigRational& operator/=(const BigRational& o) {
        if (o.v_ == 0) throw ValidationError("BigRational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
    friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
    friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
    friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }
    BigRational operator-() const { BigRational r; r.v_ = -v_; return r; }

    friend bool operator==(const BigRational& a, const BigRational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return a.v_ != b.v_; }
    friend bool operator<(const BigRational& a, const BigRational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const BigRational& a, const BigRational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const BigRational& a, const BigRational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const BigRational& a, const BigRational& b) { return a.v_ >= b.v_; }

    int sign() const { return sgn(v_); }

    BigRational pow_uint(unsigned long e) const {
        BigRational r;
        mpz_pow_ui(r.v_.get_num_mpz_t(), v_.get_num_mpz_t(), e);
        mpz_pow_ui(r.v_.get_den_mpz_t(), v_.get_den_mpz_t(), e);
        // lowest terms in, lowest terms out; no canonicalization needed
        return r;
    }

    double to_double() const { return v_.get_d(); }

    // Natural log of |value| without intermediate under/overflow.
    double log_abs() const {
        if (v_ == 0) throw ValidationError("BigRational: log of zero");
        long en = 0, ed = 0;
        double dn = mpz_get_d_2exp(&en, v_.get_num_mpz_t());
        double dd = mpz_get_d_2exp(&ed, v_.get_den_mpz_t());
        return std::log(std::fabs(dn)) - std::log(std::fabs(dd)) +
               M_LN2 * static_cast<double>(en - ed);
    }

    std::string str() const { return v_.get_str(); }

private:
    mpq_class v_;

    BigRational(mpq_class v) : v_(std::move(v)) {}
};

// Sign-and-log representation for quantities like (p/L)^j that underflow
// doubles long before they stop mattering.
struct LogScalar {
    int sign = 0;           // {-1, 0, +1}; 0 means the value is exactly zero
    double log_mag = 0.0;   // natural log of |value|, unused when sign == 0

    static LogScalar zero() { return LogScalar{0, 0.0}; }
    static LogScalar one() { return LogScalar{1, 0.0}; }

    static LogScalar from_double(double x) {
        if (x == 0.0) return zero();
        return LogScalar{x > 0 ? 1 : -1, std::log(std::fabs(x))};
    }
    static LogScalar from_log(double lg) { return LogScalar{1, lg}; }
    static LogScalar from_rational(const BigRational& q) {
        if (q.sign() == 0) return zero();
        return LogScalar{q.sign(), q.log_abs()};
    }

    double to_double() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_mag);
    }

    bool is_zero() const { return sign == 0; }

    friend LogScalar operator*(const LogScalar& a, const LogScalar& b) {
        if (a.sign == 0 || b.sign == 0) return zero();
        return LogScalar{a.sign * b.sign, a.log_mag + b.log_mag};
    }
    friend LogScalar operator/(const LogScalar& a, const LogScalar& b) {
        if (b.sign == 0) throw ValidationError("LogScalar: division by zero");
        if (a.sign == 0) return zero();
        return LogScalar{a.sign * b.sign, a.log_mag - b.log_mag};
    }

    LogScalar pow_int(long e) const {
        if (sign == 0) {
            if (e <= 0) throw ValidationError("LogScalar: 0 to nonpositive power");
            return zero();
        }
        int s = (sign < 0 && (e % 2 != 0)) ? -1 : 1;
        return LogScalar{s, log_mag * static_cast<double>(e)};
    }

    friend LogScalar operator+(const LogScalar& a, const LogScalar& b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        const LogScalar& hi = (a.log_mag >= b.log_mag) ? a : b;
        const LogScalar& lo = (a.log_mag >= b.log_mag) ? b : a;
        double d = lo.log_mag - hi.log_mag;  // <= 0
        if (hi.sign == lo.sign) return LogScalar{hi.sign, hi.log_mag + std::log1p(std::exp(d))};
        double t = -std::expm1(d);  // 1 - exp(d), in (0,1]; 0 only if d == 0
        if (t == 0.0) return zero();
        return LogScalar{hi.sign, hi.log_mag + std::log(t)};
    }
    friend LogScalar operator-(const LogScalar& a, const LogScalar& b) {
        return a + LogScalar{-b.sign, b.log_mag};
    }

    // a < b in value order
    friend bool operator<(const LogScalar& a, const LogScalar& b) {
        if (a.sign != b.sign) return a.sign < b.sign;
        if (a.sign == 0) return false;
        return a.sign > 0 ? a.log_mag < b.log_mag : a.log_mag > b.log_mag;
    }
    friend bool operator<=(const LogScalar& a, const LogScalar& b) { return !(b < a); }
};

// C(n,k) exactly; 0 when k > n.
inline BigInt binom(unsigned long n, unsigned long k) {
    if (k > n) return BigInt(0);
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// log C(n,k). Small k (or small n-k) sums term logs directly; the balanced
// regime falls back to the exact integer, whose log is correct to ~1 ulp.
// Relative accuracy of exp(result) is ~1e-12 for n up to 1e6.
inline LogScalar log_binom(unsigned long n, unsigned long k) {
    if (k > n) throw ValidationError("log_binom: k > n");
    unsigned long kk = (k <= n - k) ? k : n - k;
    if (kk == 0) return LogScalar::one();
    if (kk <= 1024) {
        double acc = 0.0;
        for (unsigned long i = 0; i < kk; ++i) {
            acc += std::log(static_cast<double>(n - i));
            acc -= std::log(static_cast<double>(i + 1));
        }
        return LogScalar::from_log(acc);
    }
    BigInt b = binom(n, k);
    long e2 = 0;
    double d = mpz_get_d_2exp(&e2, b.get_mpz_t());
    return LogScalar::from_log(std::log(d) + M_LN2 * static_cast<double>(e2));
}

// One inequality check: exact left side, floating right side, and the verdict
// left <= right * (1 + 1e-12). Both sides are reported so near-tight cases
// can be audited instead of trusting a bare boolean.
struct BoundCheck {
    BigRational lhs;
    double rhs_log;  // natural log of the right side
    bool pass;
};

struct BinomialBoundsReport {
    BoundCheck upper;        // C(n,k) <= (e*n/k)^k
    BoundCheck ratio;        // C(m,k)/C(n,k) <= (m/n)^k
    BoundCheck shift;        // C(n-j,k-j)/C(n,k) <= (k/n)^j
    bool all_pass() const { return upper.pass && ratio.pass && shift.pass; }
};

namespace detail {
inline bool leq_with_relative_slack(const BigRational& lhs, double rhs_log, double rel = 1e-12) {
    if (lhs.sign() <= 0) return true;
    return lhs.log_abs() <= rhs_log + std::log1p(rel);
}
}  // namespace detail

// Checks the three standard binomial bounds for j <= k <= m <= n.
inline BinomialBoundsReport check_binomial_bounds(unsigned long j, unsigned long k,
                                                  unsigned long m, unsigned long n) {
    if (!(j <= k && k <= m && m <= n) || n < 1 || k < 1)
        throw ValidationError("check_binomial_bounds: need j <= k <= m <= n, n >= 1, k >= 1");

    BinomialBoundsReport rep;

    const double dn = static_cast<double>(n);
    const double dk = static_cast<double>(k);

    rep.upper.lhs = BigRational(binom(n, k));
    rep.upper.rhs_log = dk * (1.0 + std::log(dn / dk));
    rep.upper.pass = detail::leq_with_relative_slack(rep.upper.lhs, rep.upper.rhs_log);

    rep.ratio.lhs = BigRational(binom(m, k), binom(n, k));
    rep.ratio.rhs_log = dk * std::log(static_cast<double>(m) / dn);
    rep.ratio.pass = detail::leq_with_relative_slack(rep.ratio.lhs, rep.ratio.rhs_log);

    rep.shift.lhs = BigRational(binom(n - j, k - j), binom(n, k));
    rep.shift.rhs_log = static_cast<double>(j) * std::log(dk / dn);
    rep.shift.pass = detail::leq_with_relative_slack(rep.shift.lhs, rep.shift.rhs_log);

    return rep;
}

}  // namespace tlab
