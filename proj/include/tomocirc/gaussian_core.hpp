#ifndef TOMOCIRC_GAUSSIAN_CORE_HPP
#define TOMOCIRC_GAUSSIAN_CORE_HPP

// Gaussian states of one or two circuit modes.
//
// Units: hbar = 1 and each quadrature is scaled by its vacuum-fluctuation
// amplitude, so that [I, V] = i and the vacuum covariance is diag(1/2, 1/2).
// Canonical ordering of the phase-space vector is (I1, V1[, I2, V2]). In the
// two-circuit model the charge Q plays the role of V (C = 1).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "tomocirc/axis.hpp"
#include "tomocirc/errors.hpp"

namespace tomocirc {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Mean vector and covariance matrix of a 1- or 2-mode Gaussian state.
///
/// The covariance is symmetrized on construction and must be positive
/// definite. Physicality (the uncertainty principle) is not enforced here;
/// use physicality_check().
template <typename Scalar>
class BasicGaussianState {
public:
    BasicGaussianState(VectorX<Scalar> mean, MatrixX<Scalar> cov)
        : mean_(std::move(mean)), cov_(std::move(cov)) {
        const auto dim = mean_.size();
        if (dim != 2 && dim != 4)
            throw ValidationError("mean", "length must be 2 (one mode) or 4 (two modes)");
        if (cov_.rows() != dim || cov_.cols() != dim)
            throw ValidationError("cov", "shape must match the mean vector");
        if (!mean_.allFinite() || !cov_.allFinite())
            throw ValidationError("cov", "entries must be finite");
        cov_ = (0.5 * (cov_ + cov_.transpose())).eval();
        Eigen::LLT<MatrixX<Scalar>> llt(cov_);
        if (llt.info() != Eigen::Success)
            throw ValidationError("cov", "covariance must be positive definite");
    }

    int n_modes() const { return static_cast<int>(mean_.size() / 2); }
    int dim() const { return static_cast<int>(mean_.size()); }
    const VectorX<Scalar>& mean() const { return mean_; }
    const MatrixX<Scalar>& cov() const { return cov_; }

    template <typename Other>
    BasicGaussianState<Other> cast() const {
        return {mean_.template cast<Other>(), cov_.template cast<Other>()};
    }

private:
    VectorX<Scalar> mean_;
    MatrixX<Scalar> cov_;
};

using GaussianState = BasicGaussianState<double>;

inline void check_mode_count(int n_modes) {
    if (n_modes != 1 && n_modes != 2)
        throw ValidationError("n_modes", "must be 1 or 2");
}

template <typename Scalar = double>
BasicGaussianState<Scalar> vacuum_state(int n_modes) {
    check_mode_count(n_modes);
    const int dim = 2 * n_modes;
    return {VectorX<Scalar>::Zero(dim), MatrixX<Scalar>::Identity(dim, dim) * Scalar(0.5)};
}

/// Block-diagonal canonical form with [[0, 1], [-1, 0]] per mode.
template <typename Scalar = double>
MatrixX<Scalar> symplectic_form(int n_modes) {
    check_mode_count(n_modes);
    MatrixX<Scalar> omega = MatrixX<Scalar>::Zero(2 * n_modes, 2 * n_modes);
    for (int m = 0; m < n_modes; ++m) {
        omega(2 * m, 2 * m + 1) = Scalar(1);
        omega(2 * m + 1, 2 * m) = Scalar(-1);
    }
    return omega;
}

/// One (mu, nu) label: the measured quadrature is mu*I + nu*V.
struct FramePair {
    double mu = 1.0;
    double nu = 0.0;
};

/// Per-mode (mu, nu) labels selecting the tomographic observable J_m = mu_m I_m + nu_m V_m.
class ReferenceFrame {
public:
    ReferenceFrame(double mu, double nu) : ReferenceFrame(std::vector<FramePair>{{mu, nu}}) {}

    explicit ReferenceFrame(std::vector<FramePair> pairs) : pairs_(std::move(pairs)) {
        if (pairs_.size() != 1 && pairs_.size() != 2)
            throw ValidationError("frame", "needs one (mu, nu) pair per mode (1 or 2 modes)");
        for (const auto& p : pairs_) {
            if (!std::isfinite(p.mu) || !std::isfinite(p.nu))
                throw ValidationError("frame", "mu and nu must be finite");
            if (p.mu == 0.0 && p.nu == 0.0)
                throw ValidationError("frame", "degenerate frame (mu, nu) = (0, 0)");
        }
    }

    /// mu = cos(theta), nu = sin(theta): the rotated-quadrature (optical) frame.
    static ReferenceFrame optical(double theta) { return {std::cos(theta), std::sin(theta)}; }

    int n_modes() const { return static_cast<int>(pairs_.size()); }
    const FramePair& operator[](int mode) const { return pairs_[static_cast<std::size_t>(mode)]; }
    const std::vector<FramePair>& pairs() const { return pairs_; }

    ReferenceFrame scaled(double lambda) const {
        auto out = pairs_;
        for (auto& p : out) {
            p.mu *= lambda;
            p.nu *= lambda;
        }
        return ReferenceFrame(std::move(out));
    }

    /// 2n x n matrix whose column m holds (mu_m, nu_m) in the rows of mode m.
    Eigen::MatrixXd projection() const {
        const int n = n_modes();
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2 * n, n);
        for (int m = 0; m < n; ++m) {
            p(2 * m, m) = pairs_[m].mu;
            p(2 * m + 1, m) = pairs_[m].nu;
        }
        return p;
    }

private:
    std::vector<FramePair> pairs_;
};

/// Closed-form Gaussian tomogram: J ~ N(mean_j, cov_j) for the given frame.
struct GaussianTomogram {
    ReferenceFrame frame;
    Eigen::VectorXd mean_j;
    Eigen::MatrixXd cov_j;

    int n_modes() const { return static_cast<int>(mean_j.size()); }
};

/// A one-mode tomogram sampled on a uniform J axis.
struct SampledTomogram {
    ReferenceFrame frame;
    UniformAxis j_axis;
    Eigen::VectorXd density;

    /// Trapezoidal integral of the density over the axis.
    double integral() const {
        double s = 0.0;
        for (int i = 0; i < j_axis.count; ++i) s += trapezoid_weight(j_axis, i) * density[i];
        return s;
    }

    /// Linear interpolation; zero outside the axis.
    double at(double j) const {
        const double x = j_axis.index_of(j);
        if (x < 0.0 || x > j_axis.count - 1) return 0.0;
        const int i = std::min(static_cast<int>(x), j_axis.count - 2);
        const double f = x - i;
        return (1.0 - f) * density[i] + f * density[i + 1];
    }
};

/// Statistics of the observable J = (mu_m I_m + nu_m V_m)_m in the given state.
inline GaussianTomogram quadrature_stats(const GaussianState& state, const ReferenceFrame& frame) {
    if (state.n_modes() != frame.n_modes())
        throw ValidationError("frame", "frame mode count does not match the state");
    const Eigen::MatrixXd p = frame.projection();
    Eigen::MatrixXd cov_j = p.transpose() * state.cov() * p;
    cov_j = 0.5 * (cov_j + cov_j.transpose());
    return {frame, p.transpose() * state.mean(), cov_j};
}

/// Natural log of the tomogram density at J.
inline double tomogram_log_density(const GaussianTomogram& tomogram, const Eigen::VectorXd& j) {
    const int n = tomogram.n_modes();
    if (j.size() != n) throw ValidationError("J", "length must equal the number of modes");
    const Eigen::VectorXd d = j - tomogram.mean_j;
    if (n == 1) {
        const double var = tomogram.cov_j(0, 0);
        return -0.5 * d[0] * d[0] / var - 0.5 * std::log(2.0 * std::numbers::pi * var);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(tomogram.cov_j);
    if (llt.info() != Eigen::Success)
        throw NumericalError("tomogram covariance is not positive definite");
    const Eigen::VectorXd z = llt.matrixL().solve(d);
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return -0.5 * z.squaredNorm() - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

inline double tomogram_density(const GaussianTomogram& tomogram, const Eigen::VectorXd& j) {
    return std::exp(tomogram_log_density(tomogram, j));
}

inline double tomogram_density(const GaussianTomogram& tomogram, double j) {
    return tomogram_density(tomogram, Eigen::VectorXd::Constant(1, j));
}

struct PhysicalityReport {
    bool physical = false;
    /// Smallest eigenvalue of cov + (i/2) Omega.
    double margin = 0.0;
};

inline constexpr double kPhysicalityTolerance = 1e-10;

/// Robertson-Schroedinger test: cov + (i/2) Omega must be positive semidefinite.
template <typename Scalar>
PhysicalityReport physicality_check(const BasicGaussianState<Scalar>& state) {
    using Complex = std::complex<Scalar>;
    const MatrixX<Scalar> omega = symplectic_form<Scalar>(state.n_modes());
    MatrixX<Complex> h = state.cov().template cast<Complex>() +
                         Complex(0, Scalar(0.5)) * omega.template cast<Complex>();
    Eigen::SelfAdjointEigenSolver<MatrixX<Complex>> solver(h, Eigen::EigenvaluesOnly);
    const double margin = static_cast<double>(solver.eigenvalues().minCoeff());
    return {margin >= -kPhysicalityTolerance, margin};
}

/// Mean excitation number of one mode relative to an oscillator of frequency
/// `omega`: (omega <I^2> + <V^2>/omega)/2 - 1/2, second moments including the mean.
template <typename Scalar>
Scalar mean_quanta(const BasicGaussianState<Scalar>& state, int mode, Scalar omega = Scalar(1)) {
    if (mode < 0 || mode >= state.n_modes()) throw ValidationError("mode", "out of range");
    const int i = 2 * mode;
    const Scalar ii = state.cov()(i, i) + state.mean()[i] * state.mean()[i];
    const Scalar vv = state.cov()(i + 1, i + 1) + state.mean()[i + 1] * state.mean()[i + 1];
    return (omega * ii + vv / omega - Scalar(1)) / Scalar(2);
}

} // namespace tomocirc

#endif
