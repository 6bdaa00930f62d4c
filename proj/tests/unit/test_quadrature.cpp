#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rcet/quadrature.hpp"

using namespace rcet;

TEST_CASE("Kronrod rule is exact for polynomials up to degree 22") {
    for (int degree = 0; degree <= 22; ++degree) {
        const auto r = quad::gauss_kronrod_15([degree](double x) { return std::pow(x, degree); }, -1.0, 2.0);
        const double exact = (std::pow(2.0, degree + 1) - std::pow(-1.0, degree + 1)) / (degree + 1);
        CHECK(std::abs(r.value - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("adaptive integration of oscillatory and peaked integrands") {
    auto osc = [](double x) { return std::cos(60.0 * x) * std::exp(-x); };
    const double exact = (1.0 - std::exp(-5.0) * (std::cos(300.0) - 60.0 * std::sin(300.0))) / (1.0 + 3600.0);
    const auto r = quad::integrate(osc, 0.0, 5.0, 1e-13);
    CHECK(r.converged);
    CHECK(std::abs(r.value - exact) < 1e-12);

    auto peak = [](double x) { return 1.0 / (1e-4 + x * x); };
    const auto p = quad::integrate(peak, -1.0, 1.0, 1e-10);
    CHECK(std::abs(p.value - 2.0 / 1e-2 * std::atan(1.0 / 1e-2)) < 1e-9);
}

TEST_CASE("breakpoint partition") {
    std::vector<double> breaks{0.0, 0.5, 0.5, 1.0, 3.0};
    const auto r = quad::integrate([](double x) { return x * x; }, breaks, 1e-14);
    CHECK(r.value == doctest::Approx(9.0).epsilon(1e-14));
    std::vector<double> bad{1.0, 0.0};
    CHECK_THROWS_AS(quad::integrate([](double) { return 1.0; }, bad, 1e-8), std::invalid_argument);
}

TEST_CASE("non-convergence is reported") {
    const auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(std::abs(x)); }, 0.0, 1.0, 1e-15, 10);
    CHECK_FALSE(r.converged);
}
