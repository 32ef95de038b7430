#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tomocirc/coupled_circuits.hpp"
#include "tomocirc/info_measures.hpp"
#include "tomocirc/sampling.hpp"

using namespace tomocirc;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

/// Classical equations of motion in (I1, Q1, I2, Q2): each normal mode
/// x = (a1 +- a2)/sqrt2 obeys dQ/dt = I, dI/dt = -w^2 Q.
Eigen::Matrix4d generator(const CoupledCircuitParams& p) {
    const double wk2 = p.L / (p.L + p.L12), ws2 = p.L / (p.L - p.L12);
    const double a = 0.5 * (wk2 + ws2), b = 0.5 * (wk2 - ws2);
    Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
    g(1, 0) = 1.0;
    g(3, 2) = 1.0;
    g(0, 1) = -a;
    g(0, 3) = -b;
    g(2, 3) = -a;
    g(2, 1) = -b;
    return g;
}

Eigen::Matrix4d rk4_transition(const CoupledCircuitParams& p, double t) {
    const Eigen::Matrix4d g = generator(p);
    const auto rhs = [&](double, const Eigen::Matrix4d& m) -> Eigen::Matrix4d { return g * m; };
    return oracle::rk4(rhs, Eigen::Matrix4d(Eigen::Matrix4d::Identity()), 0.0, t, 4000);
}

GaussianState swap_modes(const GaussianState& s) {
    Eigen::Matrix4d perm = Eigen::Matrix4d::Zero();
    perm(0, 2) = perm(1, 3) = perm(2, 0) = perm(3, 1) = 1.0;
    return {perm * s.mean(), perm * s.cov() * perm.transpose()};
}

} // namespace

TEST_CASE("normal-mode frequencies") {
    auto [wk, ws] = normal_mode_frequencies(CoupledCircuitParams{1.0, 0.0});
    CHECK(wk == 1.0);
    CHECK(ws == 1.0);
    std::tie(wk, ws) = normal_mode_frequencies(CoupledCircuitParams{1.0, 0.5});
    CHECK(wk == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
    CHECK(ws == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    // Oracle: eigenfrequencies of L * inverse([[L, L12], [L12, L]]).
    const double l = 1.3, m = -0.4;
    Eigen::Matrix2d inductance;
    inductance << l, m, m, l;
    const Eigen::Matrix2d dyn = l * inductance.inverse();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(dyn);
    std::tie(wk, ws) = normal_mode_frequencies(CoupledCircuitParams{l, m});
    CHECK(std::min(wk, ws) == doctest::Approx(std::sqrt(solver.eigenvalues()[0])).epsilon(1e-14));
    CHECK(std::max(wk, ws) == doctest::Approx(std::sqrt(solver.eigenvalues()[1])).epsilon(1e-14));

    const auto [sk, ss] = normal_mode_frequencies(CoupledCircuitParams{l, -m});
    CHECK(sk == doctest::Approx(ws));
    CHECK(ss == doctest::Approx(wk));
    CHECK_THROWS_AS(normal_mode_frequencies(CoupledCircuitParams{1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(normal_mode_frequencies(CoupledCircuitParams{-1.0, 0.0}), ValidationError);
}

TEST_CASE("propagator coefficients") {
    const auto c0 = propagator_coefficients(CoupledCircuitParams{1.0, 0.5}, 0.0);
    CHECK(c0.c_plus == 2.0);
    CHECK(c0.c_minus == 0.0);
    CHECK(c0.k_plus == 0.0);
    CHECK(c0.k_minus == 0.0);
    CHECK(c0.s_plus == 0.0);
    CHECK(c0.s_minus == 0.0);

    const auto c = propagator_coefficients(CoupledCircuitParams{1.0, 0.0}, 1.3);
    CHECK(c.c_plus == doctest::Approx(2 * std::cos(1.3)));
    CHECK(c.c_minus == doctest::Approx(0.0));
    CHECK(c.k_minus == doctest::Approx(0.0));
    CHECK(c.s_minus == doctest::Approx(0.0));

    // Single-mode blocks recovered from the sums and differences.
    const CoupledCircuitParams p{1.0, 0.35};
    const auto [wk, ws] = normal_mode_frequencies(p);
    const double t = 2.7;
    const auto k = propagator_coefficients(p, t);
    const double cos_k = 0.5 * (k.c_plus + k.c_minus), sin_k = 0.5 * (k.s_plus + k.s_minus) / wk;
    const double cos_s = 0.5 * (k.c_plus - k.c_minus), sin_s = 0.5 * (k.s_plus - k.s_minus) / ws;
    CHECK(cos_k * cos_k + sin_k * sin_k == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cos_s * cos_s + sin_s * sin_s == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(0.5 * (k.k_plus + k.k_minus) * wk == doctest::Approx(sin_k));
}

TEST_CASE("transition matrix matches RK4 integration of the classical equations") {
    Random rng(83);
    for (int n = 0; n < 5; ++n) {
        const double l = rng.uniform(0.5, 2.0);
        const CoupledCircuitParams p{l, rng.uniform(-0.9, 0.9) * l};
        const double t = rng.uniform(0.0, 10.0);
        CHECK(max_abs(transition_matrix(p, t) - rk4_transition(p, t)) < 1e-9);
    }
}

TEST_CASE("transition matrix is symplectic") {
    Random rng(89);
    const Eigen::MatrixXd omega = symplectic_form(2);
    for (int n = 0; n < 50; ++n) {
        const double l = rng.uniform(0.5, 2.0);
        const CoupledCircuitParams p{l, rng.uniform(-0.9, 0.9) * l};
        const auto m = transition_matrix(p, rng.uniform(0.0, 20.0));
        CHECK(max_abs(m * omega * m.transpose() - omega) <= 1e-12);
        CHECK(m.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(max_abs(transition_matrix(CoupledCircuitParams{1.0, 0.4}, 0.0) - Eigen::MatrixXd::Identity(4, 4)) <= 1e-15);
    const auto m = transition_matrix(CoupledCircuitParams{1.0, 0.0}, 0.9);
    CHECK(max_abs(m.topRightCorner(2, 2)) <= 1e-15);
    CHECK(m(0, 0) == doctest::Approx(std::cos(0.9)));
}

TEST_CASE("appendix propagation: identity at t = 0 and stationary uncoupled vacuum") {
    Random rng(97);
    const auto sigma0 = random_gaussian_state(2, rng);
    const auto same = propagate_dispersions(CoupledCircuitParams{1.2, 0.3}, sigma0, 0.0);
    CHECK(max_abs(same.cov() - sigma0.cov()) <= 1e-15);
    for (double t : {0.5, 3.0, 11.0}) {
        const auto out = propagate_dispersions(CoupledCircuitParams{1.0, 0.0}, vacuum_state<double>(2), t);
        CHECK(max_abs(out.cov() - vacuum_state<double>(2).cov()) <= 1e-15);
    }
}

TEST_CASE("appendix propagation equals the symplectic oracle on 500 random cases") {
    Random rng(101);
    double worst = 0.0, worst_det = 0.0, worst_mean = 0.0;
    bool all_physical = true;
    for (int n = 0; n < 500; ++n) {
        const double l = rng.uniform(0.5, 2.0);
        const CoupledCircuitParams p{l, rng.uniform(-0.9, 0.9) * l};
        const double t = rng.uniform(0.0, 20.0);
        const auto sigma0 = random_gaussian_state(2, rng);
        const auto appendix = propagate_dispersions(p, sigma0, t);
        const auto reference = symplectic_oracle(p, sigma0, t);
        worst = std::max(worst, max_abs(appendix.cov() - reference.cov()));
        worst_mean = std::max(worst_mean, (appendix.mean() - reference.mean()).cwiseAbs().maxCoeff());
        worst_det = std::max(worst_det, std::abs(appendix.cov().determinant() / sigma0.cov().determinant() - 1.0));
        all_physical = all_physical && physicality_check(appendix).physical;
    }
    CHECK(worst <= 1e-9);
    CHECK(worst_mean <= 1e-9);
    CHECK(worst_det <= 1e-9);
    CHECK(all_physical);
}

TEST_CASE("a flipped s+ sign is caught by the oracle") {
    const CoupledCircuitParams p{1.0, 0.5};
    auto k = propagator_coefficients(p, 1.0);
    k.s_plus = -k.s_plus;
    Random rng(103);
    const auto sigma0 = random_gaussian_state(2, rng);
    double diff = 0.0;
    try {
        diff = max_abs(apply_propagator(k, sigma0).cov() - symplectic_oracle(p, sigma0, 1.0).cov());
    } catch (const ValidationError&) {
        diff = 1.0;
    }
    CHECK(diff > 1e-3);
}

TEST_CASE("the L = 1, L12 = 0.5, t = 1 vacuum case") {
    const CoupledCircuitParams p{1.0, 0.5};
    const auto a = propagate_dispersions(p, vacuum_state<double>(2), 1.0);
    const auto b = symplectic_oracle(p, vacuum_state<double>(2), 1.0);
    CHECK(max_abs(a.cov() - b.cov()) <= 1e-10);
    const Eigen::MatrixXd m = rk4_transition(p, 1.0);
    CHECK(max_abs(a.cov() - 0.5 * m * m.transpose()) <= 1e-10);
}

TEST_CASE("propagation is periodic when w_k / w_s = 1/2") {
    const CoupledCircuitParams p{1.0, 0.6};
    const auto [wk, ws] = normal_mode_frequencies(p);
    CHECK(wk / ws == doctest::Approx(0.5).epsilon(1e-15));
    Random rng(107);
    const auto sigma0 = random_gaussian_state(2, rng);
    const double period = 4.0 * oracle::pi / ws;
    CHECK(max_abs(propagate_dispersions(p, sigma0, period).cov() - sigma0.cov()) <= 1e-9);
    CHECK(max_abs(propagate_dispersions(p, sigma0, 0.5 * period).cov() - sigma0.cov()) > 1e-3);
}

TEST_CASE("swapping the modes commutes with propagation") {
    Random rng(109);
    const CoupledCircuitParams p{0.9, -0.3};
    const auto sigma0 = random_gaussian_state(2, rng);
    const auto a = swap_modes(propagate_dispersions(p, sigma0, 4.2));
    const auto b = propagate_dispersions(p, swap_modes(sigma0), 4.2);
    CHECK(max_abs(a.cov() - b.cov()) <= 1e-12);
    CHECK((a.mean() - b.mean()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("long double propagation agrees with double") {
    Random rng(113);
    const CoupledCircuitParams p{1.4, 0.8};
    const auto sigma0 = random_gaussian_state(2, rng);
    const auto wide = propagate_dispersions(p, sigma0.cast<long double>(), 7.5L);
    const auto narrow = propagate_dispersions(p, sigma0, 7.5);
    CHECK(max_abs(wide.cov().cast<double>() - narrow.cov()) <= 1e-12);
}

TEST_CASE("unphysical initial dispersions are rejected") {
    const GaussianState bad(Eigen::Vector4d::Zero(), 0.3 * Eigen::Matrix4d::Identity());
    CHECK_THROWS_AS(propagate_dispersions(CoupledCircuitParams{1.0, 0.2}, bad, 1.0), ValidationError);
}

TEST_CASE("two-circuit ground-state tomogram") {
    const ReferenceFrame unit(std::vector<FramePair>{{1.0, 0.0}, {1.0, 0.0}});
    const auto uncoupled = ground_state_tomogram_2c(CoupledCircuitParams{1.0, 0.0}, 3.0, unit);
    CHECK(uncoupled.cov_j(0, 1) == doctest::Approx(0.0));
    CHECK(uncoupled.cov_j(0, 0) == doctest::Approx(0.5));

    const CoupledCircuitParams p{1.0, 0.5};
    const auto tom = ground_state_tomogram_2c(p, 1.0, unit);
    const auto via_oracle = quadrature_stats(symplectic_oracle(p, vacuum_state<double>(2), 1.0), unit);
    CHECK(max_abs(tom.cov_j - via_oracle.cov_j) <= 1e-10);

    const auto state = propagate_dispersions(p, vacuum_state<double>(2), 1.0);
    CHECK(tomographic_information(state, unit, Method::closed_form).value > 0.0);
}
