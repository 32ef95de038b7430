#include "tomocirc/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

namespace tomocirc {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Keys cubic convolution kernel, a = -1/2.
double cubic_kernel(double x) {
    x = std::abs(x);
    if (x < 1.0) return (1.5 * x - 2.5) * x * x + 1.0;
    if (x < 2.0) return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
    return 0.0;
}

// Interpolates grid values at fractional node indices (x, y); zero outside the grid.
double interpolate(const Eigen::MatrixXd& values, double x, double y, Interpolation mode) {
    const auto rows = values.rows();
    const auto cols = values.cols();
    if (x < 0.0 || y < 0.0 || x > rows - 1 || y > cols - 1) return 0.0;
    const int i0 = std::min(static_cast<int>(x), static_cast<int>(rows) - 2);
    const int j0 = std::min(static_cast<int>(y), static_cast<int>(cols) - 2);
    const double fx = x - i0;
    const double fy = y - j0;
    if (mode == Interpolation::bilinear) {
        return (1 - fx) * ((1 - fy) * values(i0, j0) + fy * values(i0, j0 + 1)) +
               fx * ((1 - fy) * values(i0 + 1, j0) + fy * values(i0 + 1, j0 + 1));
    }
    double sum = 0.0;
    for (int di = -1; di <= 2; ++di) {
        const int i = i0 + di;
        if (i < 0 || i >= rows) continue;
        const double wx = cubic_kernel(fx - di);
        double row = 0.0;
        for (int dj = -1; dj <= 2; ++dj) {
            const int j = j0 + dj;
            if (j < 0 || j >= cols) continue;
            row += cubic_kernel(fy - dj) * values(i, j);
        }
        sum += wx * row;
    }
    return sum;
}

// chi on one slice at signed radius r (negative radii by Hermitian symmetry).
Complex slice_value(const CharacteristicSlice& slice, double r) {
    const bool negative = r < 0.0;
    const double x = slice.r_axis.index_of(std::abs(r));
    const int last = slice.r_axis.count - 1;
    if (x > last) return 0.0;
    const int k = std::min(static_cast<int>(x), last - 1);
    const double f = x - k;
    const Complex v = (1.0 - f) * slice.values[k] + f * slice.values[k + 1];
    return negative ? std::conj(v) : v;
}

void validate_grid_axes(const UniformAxis& i_axis, const UniformAxis& v_axis) {
    i_axis.validate("I_axis", kMinGridNodes);
    v_axis.validate("V_axis", kMinGridNodes);
}

} // namespace

double WignerGrid::integral() const {
    double s = 0.0;
    for (int i = 0; i < i_axis.count; ++i)
        for (int v = 0; v < v_axis.count; ++v)
            s += trapezoid_weight(i_axis, i) * trapezoid_weight(v_axis, v) * values(i, v);
    return s;
}

std::pair<double, double> WignerGrid::argmax() const {
    Eigen::Index i = 0, v = 0;
    values.maxCoeff(&i, &v);
    return {i_axis.at(static_cast<int>(i)), v_axis.at(static_cast<int>(v))};
}

std::pair<double, double> WignerGrid::first_moments() const {
    double mi = 0.0, mv = 0.0;
    for (int i = 0; i < i_axis.count; ++i)
        for (int v = 0; v < v_axis.count; ++v) {
            const double w = trapezoid_weight(i_axis, i) * trapezoid_weight(v_axis, v) * values(i, v);
            mi += w * i_axis.at(i);
            mv += w * v_axis.at(v);
        }
    return {mi, mv};
}

WignerGrid wigner_of_gaussian(const GaussianState& state, const UniformAxis& i_axis,
                              const UniformAxis& v_axis) {
    if (state.n_modes() != 1) throw ValidationError("state", "Wigner grids are one-mode only");
    validate_grid_axes(i_axis, v_axis);
    const Eigen::Vector2d mean = state.mean();
    const Eigen::Matrix2d cov = state.cov();
    const auto covers = [](const UniformAxis& axis, double m, double sigma) {
        return axis.min <= m - 4.0 * sigma && axis.max >= m + 4.0 * sigma;
    };
    if (!covers(i_axis, mean[0], std::sqrt(cov(0, 0))))
        throw ValidationError("I_axis", "covers less than mean +- 4 sigma");
    if (!covers(v_axis, mean[1], std::sqrt(cov(1, 1))))
        throw ValidationError("V_axis", "covers less than mean +- 4 sigma");

    const Eigen::Matrix2d inv = cov.inverse();
    const double norm = 1.0 / (2.0 * kPi * std::sqrt(cov.determinant()));
    WignerGrid grid{i_axis, v_axis, Eigen::MatrixXd(i_axis.count, v_axis.count)};
    for (int i = 0; i < i_axis.count; ++i)
        for (int v = 0; v < v_axis.count; ++v) {
            const Eigen::Vector2d d(i_axis.at(i) - mean[0], v_axis.at(v) - mean[1]);
            grid.values(i, v) = norm * std::exp(-0.5 * d.dot(inv * d));
        }
    return grid;
}

SampledTomogram radon_forward(const WignerGrid& grid, const ReferenceFrame& frame,
                              const UniformAxis& j_axis, Interpolation interpolation) {
    if (frame.n_modes() != 1) throw ValidationError("frame", "Radon transform is one-mode only");
    j_axis.validate("J_axis");
    const double mu = frame[0].mu;
    const double nu = frame[0].nu;
    const double norm = std::hypot(mu, nu);

    // Probability mass whose projection falls outside the J axis.
    double total = 0.0, clipped = 0.0;
    for (int i = 0; i < grid.i_axis.count; ++i)
        for (int v = 0; v < grid.v_axis.count; ++v) {
            const double w = trapezoid_weight(grid.i_axis, i) * trapezoid_weight(grid.v_axis, v) *
                             grid.values(i, v);
            total += w;
            const double j = mu * grid.i_axis.at(i) + nu * grid.v_axis.at(v);
            if (j < j_axis.min || j > j_axis.max) clipped += w;
        }
    if (clipped > 1e-4 * std::abs(total))
        throw ValidationError("J_axis", "clips " + std::to_string(clipped / total) +
                                            " of the probability mass (limit 1e-4)");

    const double ds = 0.5 * std::min(grid.i_axis.step(), grid.v_axis.step());
    const Eigen::Vector2d normal(mu / norm, nu / norm);
    const Eigen::Vector2d along(-nu / norm, mu / norm);

    SampledTomogram out{frame, j_axis, Eigen::VectorXd::Zero(j_axis.count)};
    for (int n = 0; n < j_axis.count; ++n) {
        const Eigen::Vector2d origin = (j_axis.at(n) / norm) * normal;
        // Clip the line origin + s * along against the grid rectangle.
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        const double box_lo[2] = {grid.i_axis.min, grid.v_axis.min};
        const double box_hi[2] = {grid.i_axis.max, grid.v_axis.max};
        bool empty = false;
        for (int d = 0; d < 2; ++d) {
            if (std::abs(along[d]) < 1e-15) {
                if (origin[d] < box_lo[d] || origin[d] > box_hi[d]) empty = true;
                continue;
            }
            double a = (box_lo[d] - origin[d]) / along[d];
            double b = (box_hi[d] - origin[d]) / along[d];
            if (a > b) std::swap(a, b);
            lo = std::max(lo, a);
            hi = std::min(hi, b);
        }
        if (empty || !(hi > lo)) continue;

        const int steps = std::max(1, static_cast<int>(std::ceil((hi - lo) / ds)));
        const double h = (hi - lo) / steps;
        double sum = 0.0;
        for (int k = 0; k <= steps; ++k) {
            const Eigen::Vector2d p = origin + (lo + k * h) * along;
            const double w = interpolate(grid.values, grid.i_axis.index_of(p[0]),
                                         grid.v_axis.index_of(p[1]), interpolation);
            sum += (k == 0 || k == steps) ? 0.5 * w : w;
        }
        out.density[n] = sum * h / norm;
    }
    return out;
}

SampledTomogram optical_slice(const GaussianState& state, double theta, const UniformAxis& j_axis) {
    j_axis.validate("J_axis");
    const auto tomogram = quadrature_stats(state, ReferenceFrame::optical(theta));
    SampledTomogram out{tomogram.frame, j_axis, Eigen::VectorXd(j_axis.count)};
    for (int n = 0; n < j_axis.count; ++n) out.density[n] = tomogram_density(tomogram, j_axis.at(n));
    return out;
}

CharacteristicSlice characteristic_slice(const SampledTomogram& optical, const UniformAxis& r_axis) {
    r_axis.validate("r_axis");
    if (std::abs(r_axis.min) > 1e-12) throw ValidationError("r_axis", "must start at 0");
    const auto& p = optical.frame[0];
    if (std::abs(std::hypot(p.mu, p.nu) - 1.0) > 1e-12)
        throw ValidationError("frame", "characteristic slices need mu^2 + nu^2 = 1");
    double theta = std::atan2(p.nu, p.mu);
    if (theta < 0.0) theta += kPi;
    const bool flipped = p.nu < 0.0 || (p.nu == 0.0 && p.mu < 0.0);
    CharacteristicSlice slice{theta >= kPi ? 0.0 : theta, r_axis, Eigen::VectorXcd(r_axis.count)};
    const auto& axis = optical.j_axis;
    const double mass = optical.integral();
    if (!(mass > 0.0)) throw ValidationError("tomogram", "density has no probability mass");
    for (int k = 0; k < r_axis.count; ++k) {
        const double r = flipped ? -r_axis.at(k) : r_axis.at(k);
        Complex sum = 0.0;
        for (int n = 0; n < axis.count; ++n)
            sum += trapezoid_weight(axis, n) * optical.density[n] * std::polar(1.0, r * axis.at(n));
        slice.values[k] = sum / mass;
    }
    return slice;
}

CharacteristicSlice characteristic_slice(const GaussianState& state, double theta,
                                         const UniformAxis& r_axis) {
    r_axis.validate("r_axis");
    if (std::abs(r_axis.min) > 1e-12) throw ValidationError("r_axis", "must start at 0");
    const auto tomogram = quadrature_stats(state, ReferenceFrame::optical(theta));
    const double m = tomogram.mean_j[0];
    const double var = tomogram.cov_j(0, 0);
    CharacteristicSlice slice{theta, r_axis, Eigen::VectorXcd(r_axis.count)};
    for (int k = 0; k < r_axis.count; ++k) {
        const double r = r_axis.at(k);
        slice.values[k] = std::polar(std::exp(-0.5 * var * r * r), r * m);
    }
    return slice;
}

WignerGrid radon_inverse(std::span<const CharacteristicSlice> slices, const UniformAxis& i_axis,
                         const UniformAxis& v_axis) {
    validate_grid_axes(i_axis, v_axis);
    const int n_slices = static_cast<int>(slices.size());
    if (n_slices < kMinAngularSlices)
        throw ValidationError("slices", "insufficient angular sampling: need at least " +
                                            std::to_string(kMinAngularSlices) + " slices");
    const double dtheta = kPi / n_slices;
    const UniformAxis r_axis = slices.front().r_axis;
    r_axis.validate("r_axis");
    for (int s = 0; s < n_slices; ++s) {
        const auto& slice = slices[static_cast<std::size_t>(s)];
        if (std::abs(slice.theta - s * dtheta) > 1e-9)
            throw ValidationError("slices", "angles must be uniform, theta_k = k pi / N");
        if (slice.r_axis.count != r_axis.count || slice.r_axis.min != r_axis.min ||
            slice.r_axis.max != r_axis.max || slice.values.size() != r_axis.count)
            throw ValidationError("r_axis", "all slices must share one radial axis");
        if (std::abs(slice.values[0] - Complex(1.0)) > 1e-6)
            throw ValidationError("slices", "chi(0) must equal 1 (normalization)");
    }
    if (std::abs(r_axis.min) > 1e-12) throw ValidationError("r_axis", "must start at 0");
    const double nyquist = kPi / std::min(i_axis.step(), v_axis.step());
    if (r_axis.max < nyquist * (1.0 - 1e-9))
        throw ValidationError("r_axis", "bandwidth " + std::to_string(r_axis.max) +
                                            " below the grid Nyquist frequency " +
                                            std::to_string(nyquist));

    // Cartesian frequency grid k in [-R, R]^2 with the radial spacing.
    const UniformAxis k_axis{-r_axis.max, r_axis.max, 2 * r_axis.count - 1};
    const int nk = k_axis.count;
    Eigen::MatrixXcd chi(nk, nk);
    for (int a = 0; a < nk; ++a) {
        for (int b = 0; b < nk; ++b) {
            const double kx = k_axis.at(a);
            const double ky = k_axis.at(b);
            double r = std::hypot(kx, ky);
            if (r > r_axis.max) {
                chi(a, b) = 0.0;
                continue;
            }
            double theta = std::atan2(ky, kx);
            if (theta < 0.0) {
                theta += kPi;
                r = -r;
            }
            if (theta >= kPi) {
                theta -= kPi;
                r = -r;
            }
            const double x = theta / dtheta;
            const int s0 = std::min(static_cast<int>(x), n_slices - 1);
            const double f = x - s0;
            const Complex v0 = slice_value(slices[static_cast<std::size_t>(s0)], r);
            // The slice after the last one is slice 0 traversed with the opposite sign.
            const Complex v1 = s0 + 1 < n_slices
                                   ? slice_value(slices[static_cast<std::size_t>(s0 + 1)], r)
                                   : slice_value(slices[0], -r);
            const double w = trapezoid_weight(k_axis, a) * trapezoid_weight(k_axis, b);
            chi(a, b) = w * ((1.0 - f) * v0 + f * v1);
        }
    }

    const auto phase_matrix = [&](const UniformAxis& out) {
        Eigen::MatrixXcd e(out.count, nk);
        for (int i = 0; i < out.count; ++i)
            for (int a = 0; a < nk; ++a) e(i, a) = std::polar(1.0, -k_axis.at(a) * out.at(i));
        return e;
    };
    const Eigen::MatrixXcd e_i = phase_matrix(i_axis);
    const Eigen::MatrixXcd e_v = phase_matrix(v_axis);
    const Eigen::MatrixXcd partial = e_i * chi;
    const Eigen::MatrixXcd full = partial * e_v.transpose();
    WignerGrid grid{i_axis, v_axis, full.real() / (4.0 * kPi * kPi)};
    return grid;
}

} // namespace tomocirc
