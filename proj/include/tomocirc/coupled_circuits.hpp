#ifndef TOMOCIRC_COUPLED_CIRCUITS_HPP
#define TOMOCIRC_COUPLED_CIRCUITS_HPP

// Two identical resonant circuits coupled through the mutual inductance L12.
//
// Reduced units C = 1, base frequency 1. The normal modes
// I_k = (I1 + I2)/sqrt2 and I_s = (I1 - I2)/sqrt2 oscillate at
// omega_k = sqrt(L / (L + L12)) and omega_s = sqrt(L / (L - L12)), each as
// Q' = I, I' = -omega^2 Q. The state ordering is (I1, Q1, I2, Q2), i.e. the
// charge occupies the V slot of each mode.

#include <cmath>
#include <utility>

#include "tomocirc/gaussian_core.hpp"

namespace tomocirc {

struct CoupledCircuitParams {
    double L = 1.0;
    double L12 = 0.0;

    void validate() const {
        if (!std::isfinite(L) || !(L > 0.0)) throw ValidationError("L", "must be positive");
        if (!std::isfinite(L12) || !(std::abs(L12) < L))
            throw ValidationError("L12", "|L12| must be smaller than L");
    }
};

/// (omega_k, omega_s) in the requested precision.
template <typename Scalar = double>
std::pair<Scalar, Scalar> normal_mode_frequencies(const CoupledCircuitParams& params) {
    using std::sqrt;
    params.validate();
    const Scalar l(params.L), m(params.L12);
    return {sqrt(l / (l + m)), sqrt(l / (l - m))};
}

template <typename Scalar = double>
struct PropagatorCoefficients {
    Scalar t{};
    Scalar c_plus{}, c_minus{};
    Scalar k_plus{}, k_minus{};
    Scalar s_plus{}, s_minus{};
};

/// c+- = cos wk t +- cos ws t, k+- = sin wk t / wk +- sin ws t / ws,
/// s+- = wk sin wk t +- ws sin ws t.
template <typename Scalar = double>
PropagatorCoefficients<Scalar> propagator_coefficients(const CoupledCircuitParams& params, Scalar t) {
    using std::cos;
    using std::sin;
    if (!(t >= Scalar(0))) throw ValidationError("t", "must be >= 0");
    const auto [wk, ws] = normal_mode_frequencies<Scalar>(params);
    const Scalar ck = cos(wk * t), cs = cos(ws * t);
    const Scalar sk = sin(wk * t), ss = sin(ws * t);
    return {t,           ck + cs,           ck - cs,          sk / wk + ss / ws,
            sk / wk - ss / ws, wk * sk + ws * ss, wk * sk - ws * ss};
}

/// Closed-form second-moment update written out moment by moment from the
/// six propagator coefficients. The mean follows the same linear map.
template <typename Scalar>
BasicGaussianState<Scalar> apply_propagator(const PropagatorCoefficients<Scalar>& k,
                                            const BasicGaussianState<Scalar>& sigma0) {
    if (sigma0.n_modes() != 2) throw ValidationError("sigma0", "needs a two-mode state");
    enum { I1 = 0, Q1 = 1, I2 = 2, Q2 = 3 };
    const auto& s = sigma0.cov();
    const Scalar qq11 = s(Q1, Q1), qq22 = s(Q2, Q2), ii11 = s(I1, I1), ii22 = s(I2, I2);
    const Scalar q1q2 = s(Q1, Q2), i1i2 = s(I1, I2), i1q1 = s(I1, Q1), i2q2 = s(I2, Q2);
    const Scalar q1i2 = s(Q1, I2), i1q2 = s(I1, Q2);
    const Scalar cp = k.c_plus, cm = k.c_minus, kp = k.k_plus, km = k.k_minus;
    const Scalar sp = k.s_plus, sm = k.s_minus;
    const Scalar quarter(0.25), two(2);

    // Charges.
    const Scalar q1q1_t =
        quarter * (cp * cp * qq11 + cm * cm * qq22 + kp * kp * ii11 + km * km * ii22 +
                   two * (kp * km * i1i2 + cp * kp * i1q1 + cp * cm * q1q2 + cm * km * i2q2 +
                          cp * km * q1i2 + cm * kp * i1q2));
    const Scalar q2q2_t =
        quarter * (cm * cm * qq11 + cp * cp * qq22 + km * km * ii11 + kp * kp * ii22 +
                   two * (kp * km * i1i2 + cm * km * i1q1 + cp * cm * q1q2 + cp * kp * i2q2 +
                          cm * kp * q1i2 + cp * km * i1q2));
    const Scalar q1q2_t =
        quarter * (cp * cm * (qq11 + qq22) + kp * km * (ii11 + ii22) + (kp * kp + km * km) * i1i2 +
                   (cm * kp + km * cp) * (i1q1 + i2q2) + (cp * cp + cm * cm) * q1q2 +
                   (km * cm + kp * cp) * (i1q2 + q1i2));

    // Currents.
    const Scalar i1i1_t =
        quarter * (sp * sp * qq11 + sm * sm * qq22 + cp * cp * ii11 + cm * cm * ii22 +
                   two * (cp * cm * i1i2 - cp * sp * i1q1 + sp * sm * q1q2 - sm * cm * i2q2 -
                          sp * cm * q1i2 - cp * sm * i1q2));
    const Scalar i2i2_t =
        quarter * (sm * sm * qq11 + sp * sp * qq22 + cm * cm * ii11 + cp * cp * ii22 +
                   two * (cp * cm * i1i2 - cm * sm * i1q1 + sp * sm * q1q2 - cm * sp * i1q2 -
                          sm * cp * q1i2 - sp * cp * i2q2));
    const Scalar i1i2_t =
        quarter * (sm * sp * (qq11 + qq22) + cm * cp * (ii11 + ii22) + (cp * cp + cm * cm) * i1i2 -
                   (cm * sp + sm * cp) * (i1q1 + i2q2) + (sp * sp + sm * sm) * q1q2 -
                   (sm * cm + sp * cp) * (i1q2 + q1i2));

    // Current-charge covariances.
    const Scalar i1q1_t =
        quarter * (-cp * sp * qq11 - sm * cm * qq22 + cp * kp * ii11 + cm * km * ii22 -
                   (cm * sp + sm * cp) * q1q2 + (cm * kp + cp * km) * i1i2 +
                   (cp * cp - kp * sp) * i1q1 + (cm * cm - sm * km) * i2q2 +
                   (cp * cm - km * sp) * q1i2 + (cp * cm - sm * kp) * i1q2);
    const Scalar i2q2_t =
        quarter * (-cm * sm * qq11 - sp * cp * qq22 + cm * km * ii11 + cp * kp * ii22 -
                   (cp * sm + sp * cm) * q1q2 + (cm * kp + cp * km) * i1i2 +
                   (cm * cm - km * sm) * i1q1 + (cp * cp - sp * kp) * i2q2 +
                   (cp * cm - kp * sm) * q1i2 + (cp * cm - sp * km) * i1q2);
    const Scalar i2q1_t =
        quarter * (-cp * sm * qq11 - sp * cm * qq22 + cm * kp * ii11 + cp * km * ii22 -
                   (cp * sp + sm * cm) * q1q2 + (cp * kp + cm * km) * i1i2 +
                   (cp * cm - kp * sm) * i1q1 + (cp * cm - sp * km) * i2q2 +
                   (cp * cp - km * sm) * q1i2 + (cm * cm - sp * kp) * i1q2);
    const Scalar i1q2_t =
        quarter * (-cm * sp * qq11 - sm * cp * qq22 + cp * km * ii11 + cm * kp * ii22 -
                   (cp * sp + sm * cm) * q1q2 + (cp * kp + cm * km) * i1i2 +
                   (cp * cm - km * sp) * i1q1 + (cp * cm - sm * kp) * i2q2 +
                   (cm * cm - kp * sp) * q1i2 + (cp * cp - sm * km) * i1q2);

    MatrixX<Scalar> cov(4, 4);
    cov(I1, I1) = i1i1_t;
    cov(Q1, Q1) = q1q1_t;
    cov(I2, I2) = i2i2_t;
    cov(Q2, Q2) = q2q2_t;
    cov(I1, Q1) = cov(Q1, I1) = i1q1_t;
    cov(I2, Q2) = cov(Q2, I2) = i2q2_t;
    cov(I1, I2) = cov(I2, I1) = i1i2_t;
    cov(Q1, Q2) = cov(Q2, Q1) = q1q2_t;
    cov(I1, Q2) = cov(Q2, I1) = i1q2_t;
    cov(I2, Q1) = cov(Q1, I2) = i2q1_t;

    const auto& m = sigma0.mean();
    VectorX<Scalar> mean(4);
    const Scalar half(0.5);
    mean[I1] = half * (-sp * m[Q1] - sm * m[Q2] + cp * m[I1] + cm * m[I2]);
    mean[Q1] = half * (cp * m[Q1] + cm * m[Q2] + kp * m[I1] + km * m[I2]);
    mean[I2] = half * (-sm * m[Q1] - sp * m[Q2] + cm * m[I1] + cp * m[I2]);
    mean[Q2] = half * (cm * m[Q1] + cp * m[Q2] + km * m[I1] + kp * m[I2]);
    return {mean, cov};
}

/// Second moments (and mean) of the coupled pair at time t, from the closed-form coefficients.
template <typename Scalar>
BasicGaussianState<Scalar> propagate_dispersions(const CoupledCircuitParams& params,
                                                 const BasicGaussianState<Scalar>& sigma0, Scalar t) {
    if (sigma0.n_modes() != 2) throw ValidationError("sigma0", "needs a two-mode state");
    if (!physicality_check(sigma0).physical)
        throw ValidationError("sigma0", "unphysical initial state");
    return apply_propagator(propagator_coefficients<Scalar>(params, t), sigma0);
}

/// 4x4 classical transition matrix: rotate to the (k, s) normal modes, evolve each
/// as an exact harmonic oscillator, rotate back.
template <typename Scalar = double>
MatrixX<Scalar> transition_matrix(const CoupledCircuitParams& params, Scalar t) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    if (!(t >= Scalar(0))) throw ValidationError("t", "must be >= 0");
    const auto [wk, ws] = normal_mode_frequencies<Scalar>(params);

    // (I1, Q1, I2, Q2) -> (I_k, Q_k, I_s, Q_s); symmetric and orthogonal.
    const Scalar r = Scalar(1) / sqrt(Scalar(2));
    MatrixX<Scalar> mix = MatrixX<Scalar>::Zero(4, 4);
    for (int q = 0; q < 2; ++q) {
        mix(q, q) = r;
        mix(q, q + 2) = r;
        mix(q + 2, q) = r;
        mix(q + 2, q + 2) = -r;
    }
    const auto block = [&](Scalar w) {
        Eigen::Matrix<Scalar, 2, 2> b;
        b << cos(w * t), -w * sin(w * t), sin(w * t) / w, cos(w * t);
        return b;
    };
    MatrixX<Scalar> evolve = MatrixX<Scalar>::Zero(4, 4);
    evolve.template block<2, 2>(0, 0) = block(wk);
    evolve.template block<2, 2>(2, 2) = block(ws);
    return mix.transpose() * evolve * mix;
}

/// sigma(t) = M sigma(0) M^T with M = transition_matrix(params, t).
template <typename Scalar>
BasicGaussianState<Scalar> symplectic_oracle(const CoupledCircuitParams& params,
                                             const BasicGaussianState<Scalar>& sigma0, Scalar t) {
    if (sigma0.n_modes() != 2) throw ValidationError("sigma0", "needs a two-mode state");
    if (!physicality_check(sigma0).physical)
        throw ValidationError("sigma0", "unphysical initial state");
    const MatrixX<Scalar> m = transition_matrix<Scalar>(params, t);
    return {m * sigma0.mean(), m * sigma0.cov() * m.transpose()};
}

/// Two-mode tomogram of the uncoupled vacuum after evolving for time t.
inline GaussianTomogram ground_state_tomogram_2c(const CoupledCircuitParams& params, double t,
                                                 const ReferenceFrame& frames) {
    return quadrature_stats(propagate_dispersions(params, vacuum_state<double>(2), t), frames);
}

} // namespace tomocirc

#endif
