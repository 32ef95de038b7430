#ifndef TOMOCIRC_JOSEPHSON_HPP
#define TOMOCIRC_JOSEPHSON_HPP

// Parametric Josephson junction in the small-phase (quadratic) regime.
//
// Reduced units 2e = hbar = 1: the junction is an oscillator with plasma
// frequency omega(t) = sqrt(I_c(t) / C). The Gaussian state is carried by the
// complex classical solution eps(t) of eps'' + omega^2(t) eps = 0 normalized by
// the Wronskian eps' conj(eps) - conj(eps') eps = 2i, and by
// delta(t) = -(i / sqrt 2) integral_0^t I_k(tau) eps(tau) dtau for the drive I_k.

#include <complex>
#include <optional>
#include <vector>

#include "tomocirc/gaussian_core.hpp"

namespace tomocirc {

/// External classical current I_k(t).
class DriveCurrent {
public:
    static DriveCurrent constant(double value);
    /// amplitude * cos(frequency * t + phase)
    static DriveCurrent cosine(double amplitude, double frequency, double phase = 0.0);
    /// Piecewise linear through (t, value); zero outside the table.
    static DriveCurrent tabulated(std::vector<double> t, std::vector<double> value);

    double operator()(double t) const;

    enum class Kind { constant, cosine, tabulated };
    Kind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<double>& table_t() const { return table_t_; }
    const std::vector<double>& table_value() const { return table_value_; }

private:
    Kind kind_ = Kind::constant;
    std::vector<double> params_;
    std::vector<double> table_t_;
    std::vector<double> table_value_;
};

/// Time-dependent plasma frequency omega(t) plus an optional drive current.
class FrequencyProfile {
public:
    enum class Kind { constant, sudden_jump, periodic, tabulated };

    static FrequencyProfile constant(double omega);
    /// omega0 for t < t_jump, omega1 afterwards.
    static FrequencyProfile sudden_jump(double omega0, double omega1, double t_jump);
    /// omega^2(t) = omega0^2 (1 + depth cos(modulation t)), |depth| < 1.
    static FrequencyProfile periodic(double omega0, double depth, double modulation);
    /// Piecewise linear omega through strictly increasing t nodes.
    static FrequencyProfile tabulated(std::vector<double> t, std::vector<double> omega);

    FrequencyProfile with_drive(DriveCurrent drive) const;

    Kind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<double>& table_t() const { return table_t_; }
    const std::vector<double>& table_omega() const { return table_omega_; }
    const std::optional<DriveCurrent>& drive() const { return drive_; }

    double omega(double t) const;
    double omega_squared(double t) const;
    /// omega just before t = 0; sets the initial ground state.
    double initial_omega() const;
    double drive_current(double t) const { return drive_ ? (*drive_)(t) : 0.0; }
    /// Times in (t0, t1) where omega or the drive has a kink or jump.
    std::vector<double> breakpoints(double t0, double t1) const;
    /// Rejects windows where omega(t) <= 0 or a table does not cover [0, t_final].
    void validate(double t_final) const;

private:
    Kind kind_ = Kind::constant;
    std::vector<double> params_;
    std::vector<double> table_t_;
    std::vector<double> table_omega_;
    std::optional<DriveCurrent> drive_;
};

struct EpsilonTrajectory {
    std::vector<double> t;
    std::vector<double> omega;
    std::vector<std::complex<double>> eps;
    std::vector<std::complex<double>> eps_dot;
    std::vector<std::complex<double>> delta;

    std::size_t size() const { return t.size(); }
    /// |eps' conj(eps) - conj(eps') eps - 2i| at node k.
    double wronskian_error(std::size_t k) const;
    double max_wronskian_error() const;
};

inline constexpr double kMinTolerance = 1e-12;
inline constexpr double kMaxTolerance = 1e-6;

/// Integrates eps (and delta) from the instantaneous ground state at t = 0,
/// eps(0) = 1/sqrt(omega(0)), eps'(0) = i sqrt(omega(0)), with an adaptive
/// Dormand-Prince 5(4) pair. Steps land exactly on every sample time and
/// profile breakpoint. Throws NumericalError on step-size collapse.
EpsilonTrajectory evolve_epsilon(const FrequencyProfile& profile, std::vector<double> sample_times,
                                 double tol);

/// Same, sampled on `samples` uniform nodes over [0, t_final].
EpsilonTrajectory evolve_epsilon(const FrequencyProfile& profile, double t_final, double tol,
                                 int samples = 1001);

/// Covariance [[|eps|^2, Re(eps' conj eps)], [., |eps'|^2]] / 2 and mean
/// (-sqrt2 Re(delta conj eps), -sqrt2 Re(delta conj eps')).
GaussianState state_from_epsilon(const EpsilonTrajectory& traj, std::size_t index);

GaussianTomogram junction_tomogram(const EpsilonTrajectory& traj, std::size_t index,
                                   const ReferenceFrame& frame);

/// Mean excitation number relative to the instantaneous oscillator omega(t) at every node.
std::vector<double> casimir_quanta_curve(const EpsilonTrajectory& traj);

/// sqrt(I_c / C) in reduced units.
double plasma_frequency(double critical_current, double capacitance);

struct ShotNoiseReport {
    bool quantum_regime = false;
    double ratio = 0.0;  // I_c C / (32 e^3 / hbar)
};

inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kHbar = 1.054571817e-34;              // J s
inline constexpr double kShotNoiseScale =
    32.0 * kElementaryCharge * kElementaryCharge * kElementaryCharge / kHbar;

/// Quadratic approximation is trusted when I_c C exceeds 32 e^3 / hbar by 100x (SI inputs).
ShotNoiseReport shot_noise_check(double critical_current, double capacitance);

} // namespace tomocirc

#endif
