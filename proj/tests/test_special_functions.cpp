#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "raftedge/quadrature.hpp"
#include "raftedge/special_functions.hpp"

using namespace raftedge;

TEST_SUITE_BEGIN("special_functions");

TEST_CASE("adaptive quadrature integrates smooth functions") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0) == doctest::Approx(9.0).epsilon(1e-10));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846) ==
          doctest::Approx(2.0).epsilon(1e-9));
    const double bp[] = {1.0};
    CHECK(integrate_with_breakpoints([](double x) { return x < 1.0 ? 1.0 : 0.5; }, 0.0, 2.0, bp) ==
          doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("bessel_j0 reference values") {
    CHECK(bessel_j0(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bessel_j0(1.0) == doctest::Approx(0.7651976866).epsilon(1e-8));
    CHECK(bessel_j0(2.404825557695773) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(bessel_j0(10.0) == doctest::Approx(-0.2459357645).epsilon(1e-7));
    CHECK(bessel_j0(-1.0) == doctest::Approx(bessel_j0(1.0)).epsilon(1e-12));
}

TEST_CASE("bessel_j0 matches its integral representation") {
    const double pi = 3.14159265358979323846;
    for (double x : {0.3, 1.7, 5.0, 9.2, 14.6}) {
        const double ref =
            integrate([x](double t) { return std::cos(x * std::sin(t)); }, 0.0, pi, 1e-11) / pi;
        CHECK(bessel_j0(x) == doctest::Approx(ref).scale(1.0).epsilon(1e-9));
    }
}

TEST_CASE("bessel_i0 reference values") {
    CHECK(bessel_i0(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bessel_i0(1.0) == doctest::Approx(1.2660658778).epsilon(1e-8));
    CHECK(bessel_i0(5.0) == doctest::Approx(27.23987182).epsilon(1e-7));
    CHECK(bessel_i0_scaled(20.0) == doctest::Approx(std::exp(-20.0) * bessel_i0(20.0)).epsilon(1e-10));
}

TEST_CASE("marcum_q1 boundary cases") {
    CHECK(marcum_q1(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(marcum_q1(0.0, 1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-8));
    CHECK(marcum_q1(0.0, 1.0) == doctest::Approx(0.6065307).epsilon(1e-6));
    CHECK_THROWS_AS(marcum_q1(-0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(marcum_q1(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("marcum_q1 equal-argument identity") {
    // Q1(a, a) = (1 + exp(-a^2) I0(a^2)) / 2
    for (double a : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
        const double expected = 0.5 * (1.0 + bessel_i0_scaled(a * a));
        CHECK(marcum_q1(a, a) == doctest::Approx(expected).scale(1.0).epsilon(1e-8));
    }
    CHECK(marcum_q1(1.0, 1.0) == doctest::Approx(0.7328799).scale(1.0).epsilon(1e-6));
}

TEST_CASE("marcum_q1 monotone decreasing in b, increasing in a") {
    double prev = 1.0;
    for (double b = 0.2; b < 4.0; b += 0.2) {
        const double q = marcum_q1(1.2, b);
        CHECK(q <= prev + 1e-12);
        CHECK(q >= 0.0);
        CHECK(q <= 1.0);
        prev = q;
    }
    prev = 0.0;
    for (double a = 0.0; a < 4.0; a += 0.25) {
        const double q = marcum_q1(a, 1.5);
        CHECK(q >= prev - 1e-12);
        prev = q;
    }
}

TEST_SUITE_END();
