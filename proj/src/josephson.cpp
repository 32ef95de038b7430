#include "tomocirc/josephson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Core>

namespace tomocirc {

namespace {

using Complex = std::complex<double>;
using Vec3 = Eigen::Matrix<Complex, 3, 1>;  // (eps, eps', delta)

double linear_table(const std::vector<double>& t, const std::vector<double>& y, double x) {
    auto hi = std::upper_bound(t.begin(), t.end(), x);
    if (hi == t.begin()) return y.front();
    if (hi == t.end()) return y.back();
    const auto i = static_cast<std::size_t>(hi - t.begin());
    const double f = (x - t[i - 1]) / (t[i] - t[i - 1]);
    return (1.0 - f) * y[i - 1] + f * y[i];
}

void validate_table(const std::vector<double>& t, const std::vector<double>& y, const char* field) {
    if (t.size() < 2 || t.size() != y.size())
        throw ValidationError(field, "table needs at least two (t, value) pairs of equal length");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(y[i]))
            throw ValidationError(field, "table entries must be finite");
        if (i > 0 && !(t[i] > t[i - 1]))
            throw ValidationError(field, "table times must be strictly increasing");
    }
}

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) throw ValidationError(field, "must be positive");
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class Integrator {
public:
    Integrator(const FrequencyProfile& profile, double tol) : profile_(profile), tol_(tol) {}

    // Discontinuous pieces (the jump, the ends of a drive table) are resolved by
    // the segment midpoint so that stages at a segment end use the one-sided value.
    double omega_squared(double t) const {
        if (profile_.kind() == FrequencyProfile::Kind::sudden_jump) {
            const auto& p = profile_.params();
            const double w = mid_ < p[2] ? p[0] : p[1];
            return w * w;
        }
        return profile_.omega_squared(t);
    }

    double drive(double t) const {
        const auto& d = profile_.drive();
        if (!d) return 0.0;
        if (d->kind() == DriveCurrent::Kind::tabulated) {
            const auto& tt = d->table_t();
            if (mid_ < tt.front() || mid_ > tt.back()) return 0.0;
            return linear_table(tt, d->table_value(), std::clamp(t, tt.front(), tt.back()));
        }
        return (*d)(t);
    }

    Vec3 rhs(double t, const Vec3& y) const {
        Vec3 dy;
        dy[0] = y[1];
        dy[1] = -omega_squared(t) * y[0];
        dy[2] = Complex(0.0, -std::numbers::sqrt2 / 2.0) * drive(t) * y[0];
        return dy;
    }

    // Advances y from t0 to t1 exactly; h carries the step-size guess across calls.
    void advance(double t0, double t1, Vec3& y, double& h) {
        mid_ = 0.5 * (t0 + t1);
        double t = t0;
        Vec3 k1 = rhs(t, y);
        while (t < t1) {
            const double remaining = t1 - t;
            const bool last = h >= remaining;
            const double step = last ? remaining : h;
            const Vec3 k2 = rhs(t + c2 * step, y + step * a21 * k1);
            const Vec3 k3 = rhs(t + c3 * step, y + step * (a31 * k1 + a32 * k2));
            const Vec3 k4 = rhs(t + c4 * step, y + step * (a41 * k1 + a42 * k2 + a43 * k3));
            const Vec3 k5 =
                rhs(t + c5 * step, y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const Vec3 k6 =
                rhs(t + step, y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            // Compensated update: on resonant profiles |eps| grows and plain summation
            // of many tiny steps leaves a roundoff floor above the tightest tolerance.
            const Vec3 increment = step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6) - carry_;
            const Vec3 y_new = y + increment;
            const Vec3 k7 = rhs(t + step, y_new);
            const Vec3 err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double norm = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double scale = tol_ * (1.0 + std::max(std::abs(y[i]), std::abs(y_new[i])));
                norm = std::max(norm, std::abs(err[i]) / scale);
            }
            const double factor =
                norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
            if (norm <= 1.0) {
                t = last ? t1 : t + step;
                carry_ = (y_new - y) - increment;
                y = y_new;
                k1 = k7;
                h = last ? std::max(h, step * factor) : step * factor;
            } else {
                h = step * std::max(factor, 0.1);
                if (h < 1e-13 * std::max(1.0, std::abs(t)))
                    throw NumericalError("step-size collapse at t = " + std::to_string(t));
            }
        }
    }

private:
    const FrequencyProfile& profile_;
    double tol_;
    double mid_ = 0.0;
    Vec3 carry_ = Vec3::Zero();
};

} // namespace

DriveCurrent DriveCurrent::constant(double value) {
    if (!std::isfinite(value)) throw ValidationError("drive.value", "must be finite");
    DriveCurrent d;
    d.kind_ = Kind::constant;
    d.params_ = {value};
    return d;
}

DriveCurrent DriveCurrent::cosine(double amplitude, double frequency, double phase) {
    if (!std::isfinite(amplitude) || !std::isfinite(frequency) || !std::isfinite(phase))
        throw ValidationError("drive", "parameters must be finite");
    DriveCurrent d;
    d.kind_ = Kind::cosine;
    d.params_ = {amplitude, frequency, phase};
    return d;
}

DriveCurrent DriveCurrent::tabulated(std::vector<double> t, std::vector<double> value) {
    validate_table(t, value, "drive");
    DriveCurrent d;
    d.kind_ = Kind::tabulated;
    d.table_t_ = std::move(t);
    d.table_value_ = std::move(value);
    return d;
}

double DriveCurrent::operator()(double t) const {
    switch (kind_) {
    case Kind::constant:
        return params_[0];
    case Kind::cosine:
        return params_[0] * std::cos(params_[1] * t + params_[2]);
    case Kind::tabulated:
        if (t < table_t_.front() || t > table_t_.back()) return 0.0;
        return linear_table(table_t_, table_value_, t);
    }
    return 0.0;
}

FrequencyProfile FrequencyProfile::constant(double omega) {
    require_positive(omega, "profile.omega");
    FrequencyProfile p;
    p.kind_ = Kind::constant;
    p.params_ = {omega};
    return p;
}

FrequencyProfile FrequencyProfile::sudden_jump(double omega0, double omega1, double t_jump) {
    require_positive(omega0, "profile.omega0");
    require_positive(omega1, "profile.omega1");
    if (!std::isfinite(t_jump) || t_jump < 0.0)
        throw ValidationError("profile.t_jump", "must be finite and >= 0");
    FrequencyProfile p;
    p.kind_ = Kind::sudden_jump;
    p.params_ = {omega0, omega1, t_jump};
    return p;
}

FrequencyProfile FrequencyProfile::periodic(double omega0, double depth, double modulation) {
    require_positive(omega0, "profile.omega0");
    if (!(std::abs(depth) < 1.0)) throw ValidationError("profile.depth", "|depth| must be < 1");
    if (!std::isfinite(modulation)) throw ValidationError("profile.modulation", "must be finite");
    FrequencyProfile p;
    p.kind_ = Kind::periodic;
    p.params_ = {omega0, depth, modulation};
    return p;
}

FrequencyProfile FrequencyProfile::tabulated(std::vector<double> t, std::vector<double> omega) {
    validate_table(t, omega, "profile");
    for (double w : omega) require_positive(w, "profile.omega");
    FrequencyProfile p;
    p.kind_ = Kind::tabulated;
    p.table_t_ = std::move(t);
    p.table_omega_ = std::move(omega);
    return p;
}

FrequencyProfile FrequencyProfile::with_drive(DriveCurrent drive) const {
    FrequencyProfile p = *this;
    p.drive_ = std::move(drive);
    return p;
}

double FrequencyProfile::omega(double t) const {
    switch (kind_) {
    case Kind::constant:
        return params_[0];
    case Kind::sudden_jump:
        return t < params_[2] ? params_[0] : params_[1];
    case Kind::periodic:
        return std::sqrt(omega_squared(t));
    case Kind::tabulated:
        return linear_table(table_t_, table_omega_, t);
    }
    return 0.0;
}

double FrequencyProfile::omega_squared(double t) const {
    if (kind_ == Kind::periodic)
        return params_[0] * params_[0] * (1.0 + params_[1] * std::cos(params_[2] * t));
    const double w = omega(t);
    return w * w;
}

double FrequencyProfile::initial_omega() const {
    if (kind_ == Kind::sudden_jump) return params_[0];
    return omega(0.0);
}

std::vector<double> FrequencyProfile::breakpoints(double t0, double t1) const {
    std::vector<double> out;
    const auto add = [&](double t) {
        if (t > t0 && t < t1) out.push_back(t);
    };
    if (kind_ == Kind::sudden_jump) add(params_[2]);
    for (double t : table_t_) add(t);
    if (drive_)
        for (double t : drive_->table_t()) add(t);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void FrequencyProfile::validate(double t_final) const {
    if (!std::isfinite(t_final) || !(t_final > 0.0))
        throw ValidationError("t_final", "must be positive");
    if (kind_ == Kind::tabulated && (table_t_.front() > 0.0 || table_t_.back() < t_final))
        throw ValidationError("profile.t", "table must cover [0, t_final]");
}

double EpsilonTrajectory::wronskian_error(std::size_t k) const {
    const Complex w = eps_dot[k] * std::conj(eps[k]) - std::conj(eps_dot[k]) * eps[k];
    return std::abs(w - Complex(0.0, 2.0));
}

double EpsilonTrajectory::max_wronskian_error() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < size(); ++k) worst = std::max(worst, wronskian_error(k));
    return worst;
}

EpsilonTrajectory evolve_epsilon(const FrequencyProfile& profile, std::vector<double> sample_times,
                                 double tol) {
    if (!(tol >= kMinTolerance && tol <= kMaxTolerance))
        throw ValidationError("tol", "must lie in [1e-12, 1e-6]");
    if (sample_times.empty()) throw ValidationError("samples", "need at least one sample time");
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (!std::isfinite(sample_times[i]) || sample_times[i] < 0.0)
            throw ValidationError("samples", "sample times must be finite and >= 0");
        if (i > 0 && !(sample_times[i] > sample_times[i - 1]))
            throw ValidationError("samples", "sample times must be strictly increasing");
    }
    const double t_final = sample_times.back();
    profile.validate(std::max(t_final, 1e-300));
    for (double t : sample_times)
        if (!(profile.omega_squared(t) > 0.0))
            throw ValidationError("profile", "omega(t) <= 0 at t = " + std::to_string(t));

    // Local error is held a decade below tol and scaled down with the number of
    // periods so the accumulated Wronskian drift stays within 10 tol.
    const double periods = 1.0 + t_final * profile.initial_omega() / (2.0 * std::numbers::pi);
    Integrator integrator(profile, 0.1 * tol / periods);

    std::vector<double> stops = profile.breakpoints(0.0, t_final);
    stops.insert(stops.end(), sample_times.begin(), sample_times.end());
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

    const double w0 = profile.initial_omega();
    Vec3 y(Complex(1.0 / std::sqrt(w0), 0.0), Complex(0.0, std::sqrt(w0)), Complex(0.0));
    double t = 0.0;
    double h = 0.01 / w0;

    EpsilonTrajectory traj;
    std::size_t next_sample = 0;
    const auto record = [&](double when) {
        traj.t.push_back(when);
        traj.omega.push_back(when == 0.0 ? w0 : profile.omega(when));
        traj.eps.push_back(y[0]);
        traj.eps_dot.push_back(y[1]);
        traj.delta.push_back(y[2]);
    };
    for (double stop : stops) {
        if (stop > t) {
            integrator.advance(t, stop, y, h);
            t = stop;
        }
        if (next_sample < sample_times.size() && sample_times[next_sample] == stop) {
            record(stop);
            ++next_sample;
        }
    }
    return traj;
}

EpsilonTrajectory evolve_epsilon(const FrequencyProfile& profile, double t_final, double tol,
                                 int samples) {
    if (!std::isfinite(t_final) || !(t_final > 0.0))
        throw ValidationError("t_final", "must be positive");
    if (samples < 2) throw ValidationError("samples", "need at least 2 samples");
    const UniformAxis axis{0.0, t_final, samples};
    std::vector<double> times(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) times[static_cast<std::size_t>(i)] = axis.at(i);
    return evolve_epsilon(profile, std::move(times), tol);
}

GaussianState state_from_epsilon(const EpsilonTrajectory& traj, std::size_t index) {
    if (index >= traj.size()) throw ValidationError("t_index", "out of range");
    const Complex eps = traj.eps[index];
    const Complex eps_dot = traj.eps_dot[index];
    const Complex delta = traj.delta[index];
    Eigen::Matrix2d cov;
    const double cross = 0.5 * (eps_dot * std::conj(eps)).real();
    cov << 0.5 * std::norm(eps), cross, cross, 0.5 * std::norm(eps_dot);
    Eigen::Vector2d mean(-std::numbers::sqrt2 * (delta * std::conj(eps)).real(),
                         -std::numbers::sqrt2 * (delta * std::conj(eps_dot)).real());
    return {mean, cov};
}

GaussianTomogram junction_tomogram(const EpsilonTrajectory& traj, std::size_t index,
                                   const ReferenceFrame& frame) {
    return quadrature_stats(state_from_epsilon(traj, index), frame);
}

std::vector<double> casimir_quanta_curve(const EpsilonTrajectory& traj) {
    std::vector<double> n(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k)
        n[k] = mean_quanta(state_from_epsilon(traj, k), 0, traj.omega[k]);
    return n;
}

double plasma_frequency(double critical_current, double capacitance) {
    require_positive(critical_current, "I_c");
    require_positive(capacitance, "C");
    return std::sqrt(critical_current / capacitance);
}

ShotNoiseReport shot_noise_check(double critical_current, double capacitance) {
    require_positive(critical_current, "I_c");
    require_positive(capacitance, "C");
    const double ratio = critical_current * capacitance / kShotNoiseScale;
    return {ratio >= 100.0, ratio};
}

} // namespace tomocirc
