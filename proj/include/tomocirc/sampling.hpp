#ifndef TOMOCIRC_SAMPLING_HPP
#define TOMOCIRC_SAMPLING_HPP

// Reproducible random Gaussian states for sweeps and property tests.
//
// Uniform variates are built from the raw 64-bit mt19937_64 output rather
// than std::uniform_real_distribution, whose algorithm is unspecified, so a
// seed produces the same sequence on every standard library.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "tomocirc/gaussian_core.hpp"

namespace tomocirc {

class Random {
public:
    explicit Random(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

struct RandomStateRanges {
    double max_squeezing = 0.8;  // |r| per mode
    double max_thermal = 3.0;    // symplectic eigenvalues nu in [1, max_thermal]
    double max_mean = 2.0;       // |mean component|
    bool pure = false;
};

/// S diag(nu/2) S^T with S a product of phase rotations, a beam splitter and
/// single-mode squeezers; physical by construction.
inline GaussianState random_gaussian_state(int n_modes, Random& rng,
                                           const RandomStateRanges& ranges = {}) {
    check_mode_count(n_modes);
    const int dim = 2 * n_modes;
    const auto rotations = [&] {
        Eigen::MatrixXd r = Eigen::MatrixXd::Identity(dim, dim);
        for (int m = 0; m < n_modes; ++m) {
            const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
            r.block<2, 2>(2 * m, 2 * m) << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
        }
        return r;
    };
    Eigen::MatrixXd s = rotations();
    if (n_modes == 2) {
        const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double c = std::cos(a), sn = std::sin(a);
        Eigen::MatrixXd bs(4, 4);
        bs << c, 0, sn, 0, 0, c, 0, sn, -sn, 0, c, 0, 0, -sn, 0, c;
        s = bs * s;
        s = rotations() * s;
    }
    Eigen::MatrixXd squeeze = Eigen::MatrixXd::Identity(dim, dim);
    for (int m = 0; m < n_modes; ++m) {
        const double r = rng.uniform(-ranges.max_squeezing, ranges.max_squeezing);
        squeeze(2 * m, 2 * m) = std::exp(r);
        squeeze(2 * m + 1, 2 * m + 1) = std::exp(-r);
    }
    s = rotations() * squeeze * s;

    Eigen::VectorXd thermal(dim);
    for (int m = 0; m < n_modes; ++m) {
        const double nu = ranges.pure ? 1.0 : rng.uniform(1.0, ranges.max_thermal);
        thermal[2 * m] = thermal[2 * m + 1] = 0.5 * nu;
    }
    Eigen::VectorXd mean(dim);
    for (int i = 0; i < dim; ++i) mean[i] = rng.uniform(-ranges.max_mean, ranges.max_mean);
    return {mean, s * thermal.asDiagonal() * s.transpose()};
}

inline ReferenceFrame random_frame(int n_modes, Random& rng, double max_scale = 3.0) {
    std::vector<FramePair> pairs;
    for (int m = 0; m < n_modes; ++m) {
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double scale = rng.uniform(0.2, max_scale);
        pairs.push_back({scale * std::cos(theta), scale * std::sin(theta)});
    }
    return ReferenceFrame(std::move(pairs));
}

} // namespace tomocirc

#endif
