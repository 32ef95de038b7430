#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "tomocirc/josephson.hpp"

using namespace tomocirc;
using Complex = std::complex<double>;

TEST_CASE("constant frequency keeps the vacuum") {
    for (double tol : {1e-6, 1e-8, 1e-10}) {
        const auto traj = evolve_epsilon(FrequencyProfile::constant(1.0), 100.0, tol, 501);
        const auto quanta = casimir_quanta_curve(traj);
        for (double q : quanta) CHECK(std::abs(q) <= std::max(1e-10, 10 * tol));
        CHECK(traj.max_wronskian_error() <= 10 * tol);
    }
    const auto traj = evolve_epsilon(FrequencyProfile::constant(1.0), 100.0, 1e-12, 501);
    for (double q : casimir_quanta_curve(traj)) CHECK(std::abs(q) <= 1e-10);
}

TEST_CASE("constant frequency solution is exp(i w t)/sqrt(w)") {
    const double w = 1.7;
    const auto traj = evolve_epsilon(FrequencyProfile::constant(w), 30.0, 1e-12, 31);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const Complex expected = std::exp(Complex(0.0, w * traj.t[k])) / std::sqrt(w);
        CHECK(std::abs(traj.eps[k] - expected) < 1e-9);
        CHECK(std::abs(traj.eps_dot[k] - Complex(0.0, w) * expected) < 1e-9);
    }
    const auto state = state_from_epsilon(traj, traj.size() - 1);
    CHECK(state.cov()(0, 0) == doctest::Approx(0.5 / w).epsilon(1e-9));
    CHECK(state.cov()(1, 1) == doctest::Approx(0.5 * w).epsilon(1e-9));
}

TEST_CASE("sudden jump 1 -> 2 at t = 0 produces 1/8 quanta") {
    const auto traj = evolve_epsilon(FrequencyProfile::sudden_jump(1.0, 2.0, 0.0), 100.0, 1e-10, 1001);
    const auto quanta = casimir_quanta_curve(traj);
    CHECK(oracle::sudden_jump_quanta(1.0, 2.0) == doctest::Approx(0.125));
    for (std::size_t k = 1; k < quanta.size(); ++k) CHECK(std::abs(quanta[k] - 0.125) <= 1e-6);
    CHECK(traj.max_wronskian_error() <= 1e-9);
}

TEST_CASE("sudden jump later in time and other ratios") {
    const double t_jump = 2.5;
    const auto traj = evolve_epsilon(FrequencyProfile::sudden_jump(1.0, 3.0, t_jump), 20.0, 1e-10, 201);
    const auto quanta = casimir_quanta_curve(traj);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double expected = traj.t[k] < t_jump ? 0.0 : oracle::sudden_jump_quanta(1.0, 3.0);
        CHECK(std::abs(quanta[k] - expected) <= 1e-7);
    }
}

TEST_CASE("periodic modulation matches a fixed-step RK4 Mathieu oracle") {
    const double w0 = 1.0, depth = 0.3, mod = 2.0;
    const auto profile = FrequencyProfile::periodic(w0, depth, mod);
    const auto traj = evolve_epsilon(profile, std::vector<double>{0.0, 10.0, 25.0}, 1e-12);

    using V = Eigen::Vector2cd;
    const auto rhs = [&](double t, const V& y) {
        return V(y[1], -w0 * w0 * (1.0 + depth * std::cos(mod * t)) * y[0]);
    };
    const double w_init = w0 * std::sqrt(1.0 + depth);  // omega(0) sets the initial ground state
    V y(Complex(1.0 / std::sqrt(w_init), 0.0), Complex(0.0, std::sqrt(w_init)));
    y = oracle::rk4(rhs, y, 0.0, 10.0, 40000);
    CHECK(std::abs(traj.eps[1] - y[0]) < 1e-8);
    y = oracle::rk4(rhs, y, 10.0, 25.0, 60000);
    CHECK(std::abs(traj.eps[2] - y[0]) < 1e-8);
    CHECK(std::abs(traj.eps_dot[2] - y[1]) < 1e-8);
    // Parametric resonance at mod = 2 w0 pumps quanta.
    CHECK(casimir_quanta_curve(traj)[2] > 0.1);
}

TEST_CASE("covariance determinant stays 1/4 and the Wronskian holds on all profiles") {
    const std::vector<FrequencyProfile> profiles = {
        FrequencyProfile::constant(1.3), FrequencyProfile::sudden_jump(1.0, 2.0, 0.0),
        FrequencyProfile::periodic(1.0, 0.2, 1.9),
        FrequencyProfile::tabulated({0.0, 10.0, 30.0, 100.0}, {1.0, 1.5, 0.8, 1.2})};
    for (double tol : {1e-7, 1e-10}) {
        for (const auto& profile : profiles) {
            const auto traj = evolve_epsilon(profile, 100.0, tol, 401);
            CHECK(traj.max_wronskian_error() <= 10 * tol);
            // det cov - 1/4 tracks the Wronskian error, so it is checked at the tight tolerance.
            if (tol > 1e-10) continue;
            for (std::size_t k = 0; k < traj.size(); k += 20)
                CHECK(std::abs(state_from_epsilon(traj, k).cov().determinant() - 0.25) <= 1e-8);
        }
    }
}

TEST_CASE("driven mean follows the classical driven oscillator") {
    const double w = 1.3;
    const auto drive = DriveCurrent::cosine(0.7, 0.9, 0.4);
    const auto profile = FrequencyProfile::constant(w).with_drive(drive);
    const auto traj = evolve_epsilon(profile, std::vector<double>{0.0, 5.0, 17.0}, 1e-11);

    using V = Eigen::Vector2d;
    const auto rhs = [&](double t, const V& y) { return V(y[1], -w * w * y[0] + drive(t)); };
    V x = V::Zero();
    x = oracle::rk4(rhs, x, 0.0, 5.0, 20000);
    auto mean = state_from_epsilon(traj, 1).mean();
    CHECK(mean[0] == doctest::Approx(x[0]).epsilon(1e-8));
    CHECK(mean[1] == doctest::Approx(x[1]).epsilon(1e-8));
    x = oracle::rk4(rhs, x, 5.0, 17.0, 48000);
    mean = state_from_epsilon(traj, 2).mean();
    CHECK(std::abs(mean[0] - x[0]) < 1e-8);
    CHECK(std::abs(mean[1] - x[1]) < 1e-8);
}

TEST_CASE("constant drive displaces by I0 (1 - cos w t) / w^2") {
    const double w = 2.0, i0 = 0.5;
    const auto profile = FrequencyProfile::constant(w).with_drive(DriveCurrent::constant(i0));
    const auto traj = evolve_epsilon(profile, 10.0, 1e-11, 11);
    for (std::size_t k = 0; k < traj.size(); ++k)
        CHECK(std::abs(state_from_epsilon(traj, k).mean()[0] - i0 * (1.0 - std::cos(w * traj.t[k])) / (w * w)) < 1e-9);
}

TEST_CASE("junction tomogram uses the state at the sample") {
    const auto traj = evolve_epsilon(FrequencyProfile::sudden_jump(1.0, 2.0, 0.0), 5.0, 1e-10, 6);
    const ReferenceFrame frame(0.8, 0.6);
    const auto tom = junction_tomogram(traj, 3, frame);
    const auto state = state_from_epsilon(traj, 3);
    const double var = 0.64 * state.cov()(0, 0) + 2 * 0.48 * state.cov()(0, 1) + 0.36 * state.cov()(1, 1);
    CHECK(tom.cov_j(0, 0) == doctest::Approx(var));
    CHECK_THROWS_AS(junction_tomogram(traj, 99, frame), ValidationError);
}

TEST_CASE("validation of tolerances and profiles") {
    const auto profile = FrequencyProfile::constant(1.0);
    CHECK_THROWS_AS(evolve_epsilon(profile, 10.0, 1e-5), ValidationError);
    CHECK_THROWS_AS(evolve_epsilon(profile, 10.0, 1e-13), ValidationError);
    CHECK_THROWS_AS(evolve_epsilon(profile, -1.0, 1e-8), ValidationError);
    CHECK_THROWS_AS(FrequencyProfile::constant(0.0), ValidationError);
    CHECK_THROWS_AS(FrequencyProfile::periodic(1.0, 1.0, 2.0), ValidationError);
    CHECK_THROWS_AS(FrequencyProfile::sudden_jump(1.0, -2.0, 1.0), ValidationError);
    CHECK_THROWS_AS(FrequencyProfile::tabulated({0.0, 1.0}, {1.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(FrequencyProfile::tabulated({0.0, 0.0}, {1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(evolve_epsilon(FrequencyProfile::tabulated({0.0, 1.0}, {1.0, 1.0}), 5.0, 1e-8),
                    ValidationError);
}

TEST_CASE("integrator failure is a numerical error") {
    CHECK_THROWS_AS(evolve_epsilon(FrequencyProfile::constant(1e15), 1.0, 1e-8, 3), NumericalError);
}

TEST_CASE("plasma frequency and the shot-noise regime") {
    CHECK(plasma_frequency(4.0, 1.0) == doctest::Approx(2.0));
    const double scale = 32.0 * std::pow(1.602176634e-19, 3) / 1.054571817e-34;
    CHECK(scale == doctest::Approx(1.248e-21).epsilon(1e-3));
    const auto report = shot_noise_check(1e-6, 1e-12);
    CHECK(report.ratio == doctest::Approx(1e-18 / scale).epsilon(1e-12));
    CHECK(report.quantum_regime);
    CHECK_FALSE(shot_noise_check(1e-9, 1e-15).quantum_regime);
}

TEST_CASE("resonant growth keeps the Wronskian at the tightest tolerance") {
    const auto traj = evolve_epsilon(FrequencyProfile::periodic(1.0, 0.2, 2.0), 100.0, 1e-12, 1001);
    double largest = 0.0;
    for (const auto& e : traj.eps) largest = std::max(largest, std::abs(e));
    CHECK(largest > 100.0);
    CHECK(traj.max_wronskian_error() <= 1e-11);
}
