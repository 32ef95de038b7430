#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tomocirc/quadrature.hpp"

using namespace tomocirc::quad;

TEST_CASE("Gauss-Kronrod integrates smooth functions") {
    auto r = gauss_kronrod([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-14);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-14));

    r = gauss_kronrod([](double x) { return std::exp(-x * x); }, -10.0, 10.0, 1e-14);
    CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(r.error <= 1e-13);
}

TEST_CASE("Gauss-Kronrod refines around a kink") {
    const auto r = gauss_kronrod([](double x) { return std::abs(x - 0.3); }, -1.0, 1.0, 1e-12);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7).epsilon(1e-12));
}

TEST_CASE("Gauss-Kronrod reports non-convergence") {
    const auto r = gauss_kronrod([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-15, 0.0, 8);
    CHECK_FALSE(r.converged);
}

TEST_CASE("nested 2-D Gauss-Kronrod") {
    const auto r = gauss_kronrod_2d([](double x, double y) { return std::exp(-(x * x + 2.0 * y * y)); }, -9.0, 9.0,
                                    -9.0, 9.0, 1e-12, 0.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::numbers::pi / std::sqrt(2.0)).epsilon(1e-11));
}

TEST_CASE("Gauss-Legendre rules are exact to degree 2n-1") {
    for (int n : {1, 2, 5, 8, 16}) {
        const auto rule = gauss_legendre(n);
        double weight_sum = 0.0;
        for (double w : rule.weights) weight_sum += w;
        CHECK(weight_sum == doctest::Approx(2.0).epsilon(1e-14));
        const int degree = 2 * n - 1;
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], degree - 1);
        const double exact = (degree - 1) % 2 == 0 ? 2.0 / degree : 0.0;
        CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("composite Gauss-Legendre") {
    const auto rule = composite_gauss_legendre(0.0, 3.0, 4, 8);
    CHECK(rule.nodes.size() == 32);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::exp(rule.nodes[i]);
    CHECK(s == doctest::Approx(std::exp(3.0) - 1.0).epsilon(1e-14));
}
