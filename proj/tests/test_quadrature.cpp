#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "xyq/quadrature.hpp"

using namespace xyq;
using Catch::Approx;

TEST_CASE("known integrals") {
    const Integral s = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(s.value == Approx(2.0).margin(1e-10));

    const Integral p = integrate([](double x) { return x * x * x - 2.0 * x; }, -1.0, 3.0);
    CHECK(p.value == Approx(12.0).margin(1e-9));

    const Integral e = integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0);
    CHECK(e.value == Approx(std::sqrt(std::numbers::pi)).margin(1e-9));
}

TEST_CASE("error estimate bounds the true error for smooth integrands") {
    const Integral g =
        integrate([](double x) { return std::cos(3.0 * x) * std::exp(x); }, 0.0, 2.0);
    const double exact = (std::exp(2.0) * (std::cos(6.0) + 3.0 * std::sin(6.0)) - 1.0) / 10.0;
    CHECK(std::abs(g.value - exact) <= std::max(g.error_estimate * 10.0, 1e-9));
}

TEST_CASE("subdivision exhaustion raises a quadrature error with a residual") {
    QuadratureSpec tight;
    tight.abs_tol = 1e-15;
    tight.rel_tol = 1e-15;
    tight.max_subdivisions = 5;
    try {
        integrate([](double x) { return std::sqrt(std::abs(x - 0.337)); }, 0.0, 1.0, tight);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.residual_estimate > 0.0);
    }
}

TEST_CASE("invalid specs are rejected") {
    QuadratureSpec bad;
    bad.abs_tol = 0.0;
    CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, bad),
                    std::invalid_argument);
    bad = QuadratureSpec{};
    bad.max_subdivisions = 0;
    CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, bad),
                    std::invalid_argument);
}

TEST_CASE("adaptive and composite rules agree") {
    auto f = [](double x) { return 1.0 / (1.0 + x * x) + std::sin(5.0 * x); };
    const Integral a = integrate(f, 0.0, 4.0);
    const double c = composite_simpson(f, 0.0, 4.0, 10000);
    CHECK(a.value == Approx(c).margin(1e-8));
    CHECK_THROWS_AS(composite_simpson(f, 0.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("tightening tolerances refines the value within the looser estimate") {
    auto f = [](double x) { return std::sin(7.0 * x) / (1.2 + std::cos(x)); };
    QuadratureSpec loose;
    loose.abs_tol = 1e-6;
    loose.rel_tol = 1e-4;
    QuadratureSpec tight;
    tight.abs_tol = 1e-12;
    tight.rel_tol = 1e-12;
    tight.max_subdivisions = 20000;
    const Integral lo = integrate(f, 0.0, 3.0, loose);
    const Integral hi = integrate(f, 0.0, 3.0, tight);
    CHECK(std::abs(lo.value - hi.value) <= std::max(lo.error_estimate * 5.0, 1e-9));
}
