#include "tomocirc/info_measures.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "tomocirc/quadrature.hpp"

namespace tomocirc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEntropyHalfWidth = 12.0;  // in standard deviations
constexpr double kDecayExponent = 40.0;     // integrand below exp(-40) outside the box

void require_physical(const GaussianState& state, const char* field) {
    const auto report = physicality_check(state);
    if (!report.physical)
        throw ValidationError(field, "unphysical state (physicality margin " +
                                         std::to_string(report.margin) + ")");
}

void require_converged(const quad::Result& r, const std::string& what) {
    if (!r.converged)
        throw NumericalError(what + ": quadrature did not converge (error estimate " +
                             std::to_string(r.error) + ")");
}

MeasureResult make(std::string name, double value, Method method,
                   std::optional<ReferenceFrame> frame, double error) {
    return {std::move(name), value, method, std::move(frame), error};
}

double gaussian_entropy(const Eigen::MatrixXd& cov_j) {
    const auto n = static_cast<double>(cov_j.rows());
    return 0.5 * (n * std::log(2.0 * kPi * std::numbers::e) + std::log(cov_j.determinant()));
}

// chi of a Gaussian tomogram at frame k: exp(i k.m - k^T cov k / 2).
template <int Dim>
struct Characteristic {
    Eigen::Matrix<double, Dim, 1> mean;
    Eigen::Matrix<double, Dim, Dim> cov;

    std::complex<double> operator()(const Eigen::Matrix<double, Dim, 1>& k) const {
        return std::polar(std::exp(-0.5 * k.dot(cov * k)), k.dot(mean));
    }
};

// (2 pi)^-n integral chi1(k) chi2(-k) dk; the imaginary part vanishes by symmetry.
template <int Dim>
quad::Result overlap_integral(const GaussianState& a, const GaussianState& b) {
    using Vec = Eigen::Matrix<double, Dim, 1>;
    const Characteristic<Dim> chi_a{a.mean(), a.cov()};
    const Characteristic<Dim> chi_b{b.mean(), b.cov()};
    const auto kernel = [&](const Vec& k) { return (chi_a(k) * chi_b(-k)).real(); };

    if constexpr (Dim == 2) {
        // Bounding box of the ellipsoid where |chi_a chi_b| exceeds exp(-kDecayExponent).
        const Eigen::Matrix<double, Dim, Dim> sum_inv = (a.cov() + b.cov()).inverse();
        Vec half_width;
        for (int i = 0; i < Dim; ++i) half_width[i] = std::sqrt(2.0 * kDecayExponent * sum_inv(i, i));
        Vec k;
        auto r = quad::gauss_kronrod_2d(
            [&](double mu, double nu) {
                k << mu, nu;
                return kernel(k);
            },
            -half_width[0], half_width[0], -half_width[1], half_width[1], 1e-11);
        return {r.value / (2.0 * kPi), r.error / (2.0 * kPi), r.converged};
    } else {
        // Whitened coordinates k = U^-1 H u, with cov_a + cov_b = U^T U and H the
        // reflection taking e1 onto the whitened mean difference. The envelope is
        // exp(-|u|^2 / 2) and any oscillation runs along u1 only, so Gauss-Hermite
        // rules fit every axis and only the u1 order is refined.
        using Mat = Eigen::Matrix<double, Dim, Dim>;
        const Eigen::LLT<Mat> llt(a.cov() + b.cov());
        Mat to_k = llt.matrixU().solve(Mat::Identity());
        const double jacobian = std::abs(to_k.determinant());
        const Vec shift = to_k.transpose() * (a.mean() - b.mean());
        if (shift.norm() > 0.0) {
            Vec w = Vec::Unit(0) - shift.normalized();
            if (w.norm() > 1e-12) to_k = to_k * (Mat::Identity() - 2.0 * w * w.transpose() / w.squaredNorm());
        }
        const auto outer = quad::gauss_hermite(12);
        const auto tensor = [&](int order) {
            const auto first = quad::gauss_hermite(order);
            const auto n = outer.nodes.size();
            double total = 0.0;
            for (std::size_t i0 = 0; i0 < first.nodes.size(); ++i0) {
                const double u0 = first.nodes[i0];
                const Vec k0 = to_k.col(0) * u0;
                for (std::size_t i1 = 0; i1 < n; ++i1) {
                    const Vec k1 = k0 + to_k.col(1) * outer.nodes[i1];
                    for (std::size_t i2 = 0; i2 < n; ++i2) {
                        const Vec k2 = k1 + to_k.col(2) * outer.nodes[i2];
                        for (std::size_t i3 = 0; i3 < n; ++i3) {
                            const double u1 = outer.nodes[i1], u2 = outer.nodes[i2], u3 = outer.nodes[i3];
                            const double envelope = 0.5 * (u0 * u0 + u1 * u1 + u2 * u2 + u3 * u3);
                            const double weight =
                                first.weights[i0] * outer.weights[i1] * outer.weights[i2] * outer.weights[i3];
                            total += weight * kernel(Vec(k2 + to_k.col(3) * u3)) * std::exp(envelope);
                        }
                    }
                }
            }
            return total * jacobian / (4.0 * kPi * kPi);
        };
        double previous = tensor(16);
        for (int order : {24, 32, 48, 64, 96, 128, 160}) {
            const double current = tensor(order);
            const double error = std::abs(current - previous);
            if (error < 1e-10) return {current, error, true};
            previous = current;
        }
        return {previous, std::abs(previous), false};
    }
}

quad::Result overlap_integral(const GaussianState& a, const GaussianState& b) {
    return a.n_modes() == 1 ? overlap_integral<2>(a, b) : overlap_integral<4>(a, b);
}

} // namespace

std::string to_string(Method method) {
    return method == Method::quadrature ? "quadrature" : "closed-form";
}

Method method_from_string(const std::string& name) {
    if (name == "quadrature") return Method::quadrature;
    if (name == "closed-form") return Method::closed_form;
    throw ValidationError("method", "unknown method '" + name + "'");
}

MeasureResult entropy_1mode(const GaussianState& state, const ReferenceFrame& frame, Method method) {
    if (state.n_modes() != 1) throw ValidationError("state", "entropy_1mode needs a one-mode state");
    const auto tomogram = quadrature_stats(state, frame);
    if (method == Method::closed_form)
        return make("entropy", gaussian_entropy(tomogram.cov_j), method, frame, 0.0);

    const double m = tomogram.mean_j[0];
    const double s = std::sqrt(tomogram.cov_j(0, 0));
    Eigen::VectorXd j(1);
    auto r = quad::gauss_kronrod(
        [&](double x) {
            j[0] = x;
            const double log_w = tomogram_log_density(tomogram, j);
            return -std::exp(log_w) * log_w;
        },
        m - kEntropyHalfWidth * s, m + kEntropyHalfWidth * s, 1e-13, 1e-13);
    require_converged(r, "entropy");
    return make("entropy", r.value, method, frame, r.error);
}

MeasureResult entropy_2mode(const GaussianState& state, const ReferenceFrame& frames, Method method) {
    if (state.n_modes() != 2) throw ValidationError("state", "entropy_2mode needs a two-mode state");
    const auto tomogram = quadrature_stats(state, frames);
    if (method == Method::closed_form)
        return make("entropy", gaussian_entropy(tomogram.cov_j), method, frames, 0.0);

    const Eigen::VectorXd m = tomogram.mean_j;
    const double s1 = std::sqrt(tomogram.cov_j(0, 0));
    const double s2 = std::sqrt(tomogram.cov_j(1, 1));
    Eigen::VectorXd j(2);
    auto r = quad::gauss_kronrod_2d(
        [&](double x, double y) {
            j << x, y;
            const double log_w = tomogram_log_density(tomogram, j);
            return -std::exp(log_w) * log_w;
        },
        m[0] - kEntropyHalfWidth * s1, m[0] + kEntropyHalfWidth * s1,
        m[1] - kEntropyHalfWidth * s2, m[1] + kEntropyHalfWidth * s2, 1e-10);
    require_converged(r, "entropy");
    return make("entropy", r.value, method, frames, r.error);
}

MeasureResult entropy(const GaussianState& state, const ReferenceFrame& frames, Method method) {
    return state.n_modes() == 1 ? entropy_1mode(state, frames, method)
                                : entropy_2mode(state, frames, method);
}

double marginal_density(const GaussianTomogram& tomogram, int mode, double j) {
    if (tomogram.n_modes() != 2 || mode < 0 || mode > 1)
        throw ValidationError("mode", "marginals are defined for two-mode tomograms, mode 0 or 1");
    const double var = tomogram.cov_j(mode, mode);
    const double d = j - tomogram.mean_j[mode];
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * kPi * var);
}

double marginal_density_quadrature(const GaussianTomogram& tomogram, int mode, double j) {
    if (tomogram.n_modes() != 2 || mode < 0 || mode > 1)
        throw ValidationError("mode", "marginals are defined for two-mode tomograms, mode 0 or 1");
    const int other = 1 - mode;
    const double m = tomogram.mean_j[other];
    const double s = std::sqrt(tomogram.cov_j(other, other));
    Eigen::VectorXd point(2);
    auto r = quad::gauss_kronrod(
        [&](double x) {
            point[mode] = j;
            point[other] = x;
            return tomogram_density(tomogram, point);
        },
        m - kEntropyHalfWidth * s, m + kEntropyHalfWidth * s, 1e-14, 1e-12);
    require_converged(r, "marginal");
    return r.value;
}

MeasureResult tomographic_information(const GaussianState& state, const ReferenceFrame& frames,
                                      Method method) {
    if (state.n_modes() != 2)
        throw ValidationError("state", "tomographic information needs a two-mode state");
    require_physical(state, "state");
    const auto tomogram = quadrature_stats(state, frames);
    const Eigen::MatrixXd& c = tomogram.cov_j;
    if (method == Method::closed_form) {
        const double rho2 = c(0, 1) * c(0, 1) / (c(0, 0) * c(1, 1));
        return make("information", -0.5 * std::log1p(-rho2), method, frames, 0.0);
    }

    const Eigen::VectorXd m = tomogram.mean_j;
    const double s1 = std::sqrt(c(0, 0));
    const double s2 = std::sqrt(c(1, 1));
    const auto log_marginal = [](double d, double var) {
        return -0.5 * d * d / var - 0.5 * std::log(2.0 * kPi * var);
    };
    Eigen::VectorXd j(2);
    auto r = quad::gauss_kronrod_2d(
        [&](double x, double y) {
            j << x, y;
            const double log_w = tomogram_log_density(tomogram, j);
            const double log_prod = log_marginal(x - m[0], c(0, 0)) + log_marginal(y - m[1], c(1, 1));
            return std::exp(log_w) * (log_w - log_prod);
        },
        m[0] - kEntropyHalfWidth * s1, m[0] + kEntropyHalfWidth * s1,
        m[1] - kEntropyHalfWidth * s2, m[1] + kEntropyHalfWidth * s2, 1e-11);
    require_converged(r, "information");
    return make("information", r.value, method, frames, r.error);
}

MeasureResult purity(const GaussianState& state, Method method) {
    require_physical(state, "state");
    if (method == Method::closed_form) {
        const double value = 1.0 / (std::pow(2.0, state.n_modes()) * std::sqrt(state.cov().determinant()));
        return make("purity", value, method, std::nullopt, 0.0);
    }
    const auto r = overlap_integral(state, state);
    require_converged(r, "purity");
    return make("purity", r.value, method, std::nullopt, r.error);
}

MeasureResult fidelity(const GaussianState& first, const GaussianState& second, Method method) {
    if (first.n_modes() != second.n_modes())
        throw ValidationError("state2", "mode count differs from the first state");
    require_physical(first, "state");
    require_physical(second, "state2");
    if (method == Method::closed_form) {
        const Eigen::MatrixXd sum = first.cov() + second.cov();
        const Eigen::VectorXd d = first.mean() - second.mean();
        const double value = std::exp(-0.5 * d.dot(sum.ldlt().solve(d))) / std::sqrt(sum.determinant());
        return make("fidelity", value, method, std::nullopt, 0.0);
    }
    const auto r = overlap_integral(first, second);
    require_converged(r, "fidelity");
    return make("fidelity", r.value, method, std::nullopt, r.error);
}

BoundsStatus bounds_check(const MeasureResult& result) {
    return (result.value >= -kBoundsTolerance && result.value <= 1.0 + kBoundsTolerance)
               ? BoundsStatus::ok
               : BoundsStatus::violated;
}

} // namespace tomocirc
