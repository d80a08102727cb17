#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "psifrac/errors.hpp"
#include "psifrac/kernels.hpp"

using namespace psifrac;

TEST_CASE("builtin kernels: psi and dpsi values") {
    CHECK(builtin_kernel("linear").psi(3.0) == 3.0);
    CHECK(builtin_kernel("log1p").psi(std::exp(1.0) - 1.0) == doctest::Approx(1.0));
    CHECK(builtin_kernel("pow1p", {{"b", 0.8}}).dpsi(0.0) == doctest::Approx(0.8));
    CHECK(builtin_kernel("sqrt1p").psi(3.0) == doctest::Approx(2.0));
    CHECK(builtin_kernel("hadamard_log").psi(std::exp(1.0)) == doctest::Approx(1.0));
    CHECK(builtin_kernel("sine10").dpsi(0.0) == doctest::Approx(0.1));
}

TEST_CASE("builtin kernels: parameter validation") {
    CHECK_THROWS_AS(builtin_kernel("nope"), std::invalid_argument);
    CHECK_THROWS_AS(builtin_kernel("pow1p"), std::invalid_argument);
    CHECK_THROWS_AS(builtin_kernel("pow1p", {{"b", -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(builtin_kernel("pow1p", {{"b", 1.0}, {"c", 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(builtin_kernel("linear", {{"b", 1.0}}), std::invalid_argument);
}

TEST_CASE("parse_kernel grammar") {
    Kernel k = parse_kernel("pow1p:b=0.66734");
    CHECK(k.name() == "pow1p");
    REQUIRE(k.params().size() == 1);
    CHECK(k.params()[0].second == doctest::Approx(0.66734));
    CHECK(parse_kernel("linear").name() == "linear");
    CHECK_THROWS_AS(parse_kernel("pow1p:b"), std::invalid_argument);
    CHECK_THROWS_AS(parse_kernel("pow1p:b=abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_kernel("pow1p:"), std::invalid_argument);
}

TEST_CASE("validate: admissibility on the working intervals") {
    CHECK(!validate(builtin_kernel("sine10"), Interval(0.0, 5.0), 64));
    CHECK(!validate(builtin_kernel("linear"), Interval(-3.0, 7.0), 16));
    for (const char* name : {"linear", "log1p", "sqrt1p", "sine10"})
        CHECK(!validate(builtin_kernel(name), Interval(0.0, 5.0), 64));
    CHECK(!validate(builtin_kernel("pow1p", {{"b", 0.8}}), Interval(0.0, 11.0), 64));
    CHECK(!validate(builtin_kernel("sine10"), Interval(0.0, 11.0), 64));
    CHECK(!validate(builtin_kernel("hadamard_log"), Interval(0.5, 5.0), 64));
}

TEST_CASE("validate: sine10 fails past x = 5*pi") {
    auto v = validate(builtin_kernel("sine10"), Interval(0.0, 20.0), 64);
    REQUIRE(v.has_value());
    CHECK(v->reason == "dpsi must be positive");
    CHECK(std::fabs(v->x - 5.0 * M_PI) < 1.5);  // first offending Chebyshev node
    CHECK(v->value <= 0.0);
}

TEST_CASE("validate: catches a wrong analytic dpsi") {
    Kernel bad("bad", [](double x) { return x * x; }, [](double) { return 1.0; });
    auto v = validate(bad, Interval(1.0, 2.0), 16);
    REQUIRE(v.has_value());
    CHECK(v->reason == "dpsi disagrees with differenced psi");
    CHECK_THROWS_AS(validate_or_throw(bad, Interval(1.0, 2.0)), std::invalid_argument);
}

TEST_CASE("psi monotone on validated intervals") {
    for (const char* name : {"linear", "log1p", "sqrt1p", "sine10"}) {
        Kernel k = builtin_kernel(name);
        double prev = k.psi(0.0);
        for (int i = 1; i <= 50; ++i) {
            double x = 5.0 * i / 50.0;
            double cur = k.psi(x);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("inverse: analytic and Newton paths agree") {
    Kernel with_inv = builtin_kernel("log1p");
    Kernel no_inv("log1p_noinv", [](double x) { return std::log1p(x); },
                  [](double x) { return 1.0 / (x + 1.0); });
    for (double v : {0.1, 0.5, 1.2, 1.7}) {
        double t_a = with_inv.inverse(v, 0.0, 5.0);
        double t_n = no_inv.inverse(v, 0.0, 5.0);
        CHECK(t_a == doctest::Approx(std::expm1(v)).epsilon(1e-13));
        CHECK(std::fabs(no_inv.psi(t_n) - v) <= 1e-12 * (1.0 + std::fabs(v)));
    }
    CHECK_THROWS_AS(no_inv.inverse(3.0, 0.0, 5.0), numeric_error);  // psi(5) < 3
}

TEST_CASE("d2psi/d3psi: differenced fallback tracks the analytic forms") {
    Kernel an = builtin_kernel("log1p");
    Kernel fd("log1p_fd", [](double x) { return std::log1p(x); },
              [](double x) { return 1.0 / (x + 1.0); });
    for (double x : {0.2, 1.0, 3.5}) {
        CHECK(fd.d2psi(x) == doctest::Approx(an.d2psi(x)).epsilon(1e-6));
        CHECK(fd.d3psi(x) == doctest::Approx(an.d3psi(x)).epsilon(1e-4));
    }
}

TEST_CASE("Interval validation") {
    CHECK_THROWS_AS(Interval(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Interval(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Interval(0.0, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK(Interval(0.0, 5.0).width() == 5.0);
}

TEST_CASE("validate rejects too few samples") {
    CHECK_THROWS_AS(validate(builtin_kernel("linear"), Interval(0.0, 1.0), 1),
                    std::invalid_argument);
}
