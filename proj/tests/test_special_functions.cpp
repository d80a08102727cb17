#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "psifrac/errors.hpp"
#include "psifrac/special_functions.hpp"

using namespace psifrac;
namespace sp = psifrac::special;

TEST_CASE("gamma: known values") {
    CHECK(sp::gamma(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(sp::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(sp::gamma(2.5) == doctest::Approx(1.5 * 0.5 * std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(sp::gamma(1.0) == doctest::Approx(1.0));
    // reflection territory
    CHECK(sp::gamma(-0.5) == doctest::Approx(-2.0 * std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("gamma: poles rejected") {
    CHECK_THROWS_AS(sp::gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(sp::gamma(-1.0), std::domain_error);
    CHECK_THROWS_AS(sp::gamma(-17.0), std::domain_error);
}

TEST_CASE("gamma: recurrence Gamma(x+1) = x Gamma(x) on (0.1, 20)") {
    for (int i = 0; i < 200; ++i) {
        double x = oracles::uniform(0.1, 20.0);
        double r = sp::gamma(x + 1.0) / (x * sp::gamma(x));
        CHECK(std::fabs(r - 1.0) <= 1e-12);
    }
}

TEST_CASE("beta: values and symmetry") {
    CHECK(sp::beta(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(sp::beta(0.5, 0.5) == doctest::Approx(M_PI).epsilon(1e-13));
    CHECK(sp::beta(2.0, 3.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
    for (int i = 0; i < 50; ++i) {
        double x = oracles::uniform(0.05, 12.0);
        double y = oracles::uniform(0.05, 12.0);
        double d = std::fabs(sp::beta(x, y) - sp::beta(y, x));
        CHECK(d <= 1e-13 * std::fabs(sp::beta(x, y)));
    }
    CHECK_THROWS_AS(sp::beta(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(sp::beta(1.0, -2.0), std::domain_error);
}

TEST_CASE("gen_binomial: base cases and integer agreement") {
    CHECK(sp::gen_binomial(0.5, 0) == 1.0);
    CHECK(sp::gen_binomial(0.5, 1) == doctest::Approx(0.5));
    CHECK(sp::gen_binomial(0.5, 2) == doctest::Approx(-0.125));
    for (int n = 0; n <= 12; ++n) {
        double c = 1.0;  // running integer binomial C(n,k)
        for (int k = 0; k <= n; ++k) {
            CHECK(sp::gen_binomial(double(n), k) == doctest::Approx(c).epsilon(1e-13));
            c = c * (n - k) / (k + 1);
        }
    }
    CHECK(sp::gen_binomial(3.0, 5) == doctest::Approx(0.0));
    CHECK_THROWS_AS(sp::gen_binomial(1.0, -1), std::domain_error);
}

TEST_CASE("euler_gamma") {
    CHECK(sp::euler_gamma() == doctest::Approx(0.5772156649).epsilon(1e-10));
    CHECK(std::floor(sp::euler_gamma() * 1e4) == 5772.0);  // printed 0.5772
    CHECK(std::exp(sp::euler_gamma() * 0.0) == 1.0);
}

TEST_CASE("mittag_leffler: special cases") {
    CHECK(sp::mittag_leffler(1.0, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(sp::mittag_leffler(0.5, 0.0) == 1.0);
    CHECK(sp::mittag_leffler(2.0, 1.0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
}

TEST_CASE("mittag_leffler: E_1 = exp on [-5,5]") {
    for (int i = 0; i <= 100; ++i) {
        double z = -5.0 + 0.1 * i;
        double e = std::exp(z);
        CHECK(std::fabs(sp::mittag_leffler(1.0, z) - e) <= 1e-10 * std::fabs(e));
    }
}

TEST_CASE("mittag_leffler: E_2(z^2) = cosh(z) on [0,3]") {
    for (int i = 0; i <= 60; ++i) {
        double z = 0.05 * i;
        double c = std::cosh(z);
        CHECK(std::fabs(sp::mittag_leffler(2.0, z * z) - c) <= 1e-10 * c);
    }
}

TEST_CASE("mittag_leffler: agrees with the long-double reference") {
    for (double alpha : {0.4, 0.8}) {
        for (double z : {0.3, 2.0, 4.0}) {
            double v = sp::mittag_leffler(alpha, z);
            double r = oracles::ml_reference(alpha, z);
            CHECK(std::fabs(v - r) <= 1e-11 * (1.0 + std::fabs(r)));
        }
    }
    for (double alpha : {1.4, 2.5, 4.4}) {
        for (double z : {0.3, 2.0, 10.0, 60.0, 136.0}) {
            double v = sp::mittag_leffler(alpha, z);
            double r = oracles::ml_reference(alpha, z);
            CHECK(std::fabs(v - r) <= 1e-11 * (1.0 + std::fabs(r)));
        }
    }
}

TEST_CASE("mittag_leffler: error paths") {
    sp::MLConfig tight;
    tight.max_terms = 5;
    CHECK_THROWS_AS(sp::mittag_leffler(0.4, 30.0, tight), numeric_error);
    CHECK_THROWS_AS(sp::mittag_leffler(-1.0, 1.0), std::domain_error);
    sp::MLConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(sp::mittag_leffler(1.0, 1.0, bad), std::invalid_argument);
    // genuinely divergent budget: huge z with small alpha overflows the terms
    CHECK_THROWS_AS(sp::mittag_leffler(0.3, 1e6), numeric_error);
}

TEST_CASE("ml_power_series_deriv: matches differenced E_alpha(lambda w^alpha)") {
    for (double alpha : {0.5, 0.8, 1.5}) {
        for (double lambda : {0.8, -0.4}) {
            auto f = [&](double w) {
                return sp::mittag_leffler(alpha, lambda * std::pow(w, alpha));
            };
            for (double w : {0.4, 0.9, 1.7}) {
                double h = 1e-6 * w;
                double fd1 = (f(w + h) - f(w - h)) / (2.0 * h);
                CHECK(sp::ml_power_series_deriv(alpha, lambda, w, 1) ==
                      doctest::Approx(fd1).epsilon(1e-7));
                double h2 = 1e-4 * w;  // second difference needs a coarser step
                double fd2 = (f(w + h2) - 2.0 * f(w) + f(w - h2)) / (h2 * h2);
                CHECK(sp::ml_power_series_deriv(alpha, lambda, w, 2) ==
                      doctest::Approx(fd2).epsilon(1e-5));
            }
        }
    }
    CHECK(sp::ml_power_series_deriv(0.7, 0.0, 0.5, 1) == doctest::Approx(0.0));
    CHECK(sp::ml_power_series_deriv(0.7, 0.0, 0.5, 0) == doctest::Approx(1.0));
}
