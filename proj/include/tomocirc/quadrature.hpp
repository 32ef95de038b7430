#ifndef TOMOCIRC_QUADRATURE_HPP
#define TOMOCIRC_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include <Eigen/Dense>

namespace tomocirc::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half; node 0 is the centre).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};
// Gauss weights for the 7-point rule, living on Kronrod nodes 0, 2, 4, 6.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
};

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

template <typename F>
Interval gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = kKronrodWeights[0] * fc;
    double gauss = kGaussWeights[0] * fc;
    for (int i = 1; i < 8; ++i) {
        const double x = h * kKronrodNodes[i];
        const double sum = f(c - x) + f(c + x);
        kronrod += kKronrodWeights[i] * sum;
        if (i % 2 == 0) gauss += kGaussWeights[i / 2] * sum;
    }
    return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7, 15) quadrature of f over [a, b].
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below max(abs_tol, rel_tol * |value|) or max_intervals
/// is reached.
template <typename F>
Result gauss_kronrod(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                     int max_intervals = 2000) {
    std::priority_queue<detail::Interval> heap;
    // Start from a few panels so narrow features near the centre are not missed.
    constexpr int kInitialPanels = 4;
    const double w = (b - a) / kInitialPanels;
    double value = 0.0, error = 0.0;
    for (int i = 0; i < kInitialPanels; ++i) {
        auto iv = detail::gk15(f, a + i * w, i + 1 == kInitialPanels ? b : a + (i + 1) * w);
        value += iv.value;
        error += iv.error;
        heap.push(iv);
    }
    while (error > std::max(abs_tol, rel_tol * std::abs(value)) &&
           static_cast<int>(heap.size()) < max_intervals) {
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const auto left = detail::gk15(f, worst.a, mid);
        const auto right = detail::gk15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed accumulated cancellation error.
    value = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    return {value, error, error <= std::max(abs_tol, rel_tol * std::abs(value))};
}

/// Iterated adaptive quadrature over the box [ax, bx] x [ay, by] of f(x, y).
template <typename F>
Result gauss_kronrod_2d(F&& f, double ax, double bx, double ay, double by, double abs_tol,
                        double rel_tol = 0.0) {
    const double width = bx - ax;
    double inner_error = 0.0;
    bool inner_ok = true;
    auto outer = gauss_kronrod(
        [&](double x) {
            auto inner = gauss_kronrod([&](double y) { return f(x, y); }, ay, by,
                                       0.1 * abs_tol / width, rel_tol);
            inner_error = std::max(inner_error, inner.error);
            inner_ok = inner_ok && inner.converged;
            return inner.value;
        },
        ax, bx, 0.5 * abs_tol, rel_tol);
    return {outer.value, outer.error + inner_error * width, outer.converged && inner_ok};
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline Rule gauss_legendre(int n) {
    Rule rule{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

/// Gauss-Hermite nodes and weights for integral f(x) exp(-x^2 / 2) dx over the real line
/// (Golub-Welsch on the probabilists' Hermite recurrence).
inline Rule gauss_hermite(int n) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    Rule rule{std::vector<double>(n), std::vector<double>(n)};
    const double mass = std::sqrt(2.0 * std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = solver.eigenvalues()[i];
        const double v = solver.eigenvectors()(0, i);
        rule.weights[i] = mass * v * v;
    }
    return rule;
}

/// Composite Gauss-Legendre nodes/weights on [a, b]: `panels` panels of `order` points.
inline Rule composite_gauss_legendre(double a, double b, int panels, int order) {
    const Rule base = gauss_legendre(order);
    Rule out;
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * w;
        for (int i = 0; i < order; ++i) {
            out.nodes.push_back(lo + 0.5 * w * (base.nodes[i] + 1.0));
            out.weights.push_back(0.5 * w * base.weights[i]);
        }
    }
    return out;
}

} // namespace tomocirc::quad

#endif
