#include "doctest.h"

#include <cmath>
#include <vector>

#include "tlab/exact.hpp"

using namespace tlab;

namespace {

// Independent oracle: Pascal's triangle, addition only.
std::vector<std::vector<BigInt>> pascal_table(unsigned max_n) {
    std::vector<std::vector<BigInt>> t(max_n + 1);
    for (unsigned n = 0; n <= max_n; ++n) {
        t[n].resize(n + 1);
        t[n][0] = 1;
        t[n][n] = 1;
        for (unsigned k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
    }
    return t;
}

}  // namespace

TEST_CASE("binom matches the Pascal oracle up to n = 60") {
    const auto t = pascal_table(60);
    for (unsigned n = 0; n <= 60; ++n)
        for (unsigned k = 0; k <= n; ++k) CHECK(binom(n, k) == t[n][k]);
}

TEST_CASE("binom basics") {
    CHECK(binom(5, 2) == 10);
    CHECK(binom(10, 5) == 252);  // value from the Pascal oracle
    CHECK(binom(0, 0) == 1);
    CHECK(binom(7, 0) == 1);
    CHECK(binom(3, 5) == 0);
    for (unsigned n = 0; n <= 40; ++n)
        for (unsigned k = 0; k <= n; ++k) CHECK(binom(n, k) == binom(n, n - k));
}

TEST_CASE("log_binom tracks the exact value") {
    auto rel_err = [](const LogScalar& ls, const BigInt& exact) {
        long e2 = 0;
        double d = mpz_get_d_2exp(&e2, exact.get_mpz_t());
        double exact_log = std::log(d) + M_LN2 * static_cast<double>(e2);
        return std::fabs(ls.log_mag - exact_log);
    };
    CHECK(rel_err(log_binom(5, 2), binom(5, 2)) < 1e-10);
    CHECK(rel_err(log_binom(20, 10), binom(20, 10)) < 1e-10);  // log 184756
    CHECK(binom(20, 10) == 184756);
    CHECK(rel_err(log_binom(1000000, 2), BigInt("499999500000")) < 1e-10);
    CHECK(rel_err(log_binom(1000000, 500000), binom(1000000, 500000)) < 1e-9);
    CHECK_THROWS_AS(log_binom(3, 4), ValidationError);
}

TEST_CASE("check_binomial_bounds frozen examples") {
    {
        auto rep = check_binomial_bounds(0, 2, 3, 6);
        CHECK(rep.upper.lhs == BigRational(15));
        CHECK(rep.upper.rhs_log == doctest::Approx(2.0 * std::log(3.0 * std::exp(1.0))));
        CHECK(rep.upper.pass);
        CHECK(rep.all_pass());
    }
    {
        // j = k: third bound becomes 1/C(n,k) <= (k/n)^k
        auto rep = check_binomial_bounds(3, 3, 5, 9);
        CHECK(rep.shift.lhs == BigRational(1, binom(9, 3)));
        CHECK(rep.shift.pass);
    }
    {
        // j = 0: third bound degenerates to 1 <= 1
        auto rep = check_binomial_bounds(0, 4, 6, 11);
        CHECK(rep.shift.lhs == BigRational(1));
        CHECK(rep.shift.rhs_log == 0.0);
        CHECK(rep.shift.pass);
    }
    CHECK_THROWS_AS(check_binomial_bounds(3, 2, 5, 9), ValidationError);
}

TEST_CASE("all three bounds hold on the full grid n <= 40") {
    for (unsigned n = 1; n <= 40; ++n)
        for (unsigned m = 1; m <= n; ++m)
            for (unsigned k = 1; k <= m; ++k)
                for (unsigned j = 1; j <= k; ++j) {
                    auto rep = check_binomial_bounds(j, k, m, n);
                    CHECK(rep.all_pass());
                }
}

TEST_CASE("BigRational arithmetic is exact") {
    BigRational a(3, 7), b(7, 3);
    CHECK(a * b == BigRational(1));
    CHECK(BigRational(1, 3) + BigRational(1, 6) == BigRational(1, 2));
    CHECK(BigRational(-2, 4).numerator() == -1);
    CHECK(BigRational(-2, 4).denominator() == 2);
    CHECK(BigRational(6, 252) == BigRational(1, 42));
    CHECK_THROWS_AS(BigRational(1, 2) / BigRational(0), ValidationError);
    // log of a value far outside double range
    BigRational tiny(BigInt(1), binom(3000, 1500));
    CHECK(tiny.log_abs() == doctest::Approx(-log_binom(3000, 1500).log_mag).epsilon(1e-9));
}

TEST_CASE("LogScalar sums and products stay accurate") {
    auto x = LogScalar::from_double(3.5);
    auto y = LogScalar::from_double(-1.25);
    CHECK((x * y).to_double() == doctest::Approx(-4.375).epsilon(1e-12));
    CHECK((x + y).to_double() == doctest::Approx(2.25).epsilon(1e-12));
    CHECK((y + x).to_double() == doctest::Approx(2.25).epsilon(1e-12));
    CHECK((x - x).is_zero());
    CHECK(LogScalar::from_double(2.0).pow_int(10).to_double() == doctest::Approx(1024.0));
    CHECK(LogScalar::zero().to_double() == 0.0);
    CHECK((LogScalar::zero() + x).to_double() == doctest::Approx(3.5));
    // ordering follows value order across signs
    CHECK(y < x);
    CHECK(LogScalar::zero() < x);
    CHECK(y < LogScalar::zero());
}
