#ifndef TOMOCIRC_TOMOGRAPHY_HPP
#define TOMOCIRC_TOMOGRAPHY_HPP

// Radon transform between Wigner-function grids and symplectic tomograms.
//
// Normalization convention: W integrates to 1 over the (I, V) plane,
// w(J; mu, nu) = integral of W(I, V) delta(J - mu I - nu V) dI dV integrates
// to 1 over J, chi(mu, nu) = integral of w(J; mu, nu) exp(iJ) dJ, and
//
//   W(I, V) = (2 pi)^-2 integral chi(mu, nu) exp(-i (mu I + nu V)) dmu dnu.
//
// With this choice the vacuum reconstructs to the vacuum.

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tomocirc/axis.hpp"
#include "tomocirc/gaussian_core.hpp"

namespace tomocirc {

/// Wigner density sampled on a uniform (I, V) grid; values(i, v) is W(I_i, V_v).
struct WignerGrid {
    UniformAxis i_axis;
    UniformAxis v_axis;
    Eigen::MatrixXd values;

    /// 2-D trapezoidal integral.
    double integral() const;
    /// Grid node closest to the maximum value, as (I, V).
    std::pair<double, double> argmax() const;
    /// First moments (integral of I W, integral of V W) by trapezoid.
    std::pair<double, double> first_moments() const;
};

/// One radial line of the characteristic function: values[k] = chi(r_k cos theta, r_k sin theta).
struct CharacteristicSlice {
    double theta = 0.0;
    UniformAxis r_axis;
    Eigen::VectorXcd values;
};

enum class Interpolation { bilinear, bicubic };

inline constexpr int kMinGridNodes = 16;
inline constexpr int kMinAngularSlices = 32;

/// Bivariate normal Wigner function of a one-mode Gaussian state.
/// Rejects axes that cover less than mean +- 4 sigma.
WignerGrid wigner_of_gaussian(const GaussianState& state, const UniformAxis& i_axis,
                              const UniformAxis& v_axis);

/// Line integrals of W along mu I + nu V = J for each J on j_axis.
///
/// Lines are sampled at half the smaller grid spacing. Rejects a J axis that
/// leaves more than 1e-4 of the grid's probability mass outside its range.
SampledTomogram radon_forward(const WignerGrid& grid, const ReferenceFrame& frame,
                              const UniformAxis& j_axis,
                              Interpolation interpolation = Interpolation::bicubic);

/// Closed-form Gaussian tomogram at the optical frame (cos theta, sin theta), sampled on j_axis.
SampledTomogram optical_slice(const GaussianState& state, double theta, const UniformAxis& j_axis);

/// chi along the ray at angle theta, computed from a sampled optical tomogram
/// by trapezoidal Fourier integration over J, divided by the tomogram's
/// trapezoidal mass so that chi(0) = 1. r_axis must start at 0.
CharacteristicSlice characteristic_slice(const SampledTomogram& optical, const UniformAxis& r_axis);

/// Closed-form chi of a one-mode Gaussian state along the ray at angle theta.
CharacteristicSlice characteristic_slice(const GaussianState& state, double theta,
                                         const UniformAxis& r_axis);

/// Fourier-slice reconstruction of W from characteristic slices at theta_k = k pi / N.
///
/// The polar samples are bilinearly resampled onto a Cartesian frequency grid
/// (spacing equal to the radial spacing, negative radii via chi(-k) = conj chi(k))
/// and inverted by a separable 2-D Fourier sum evaluated directly on the output axes.
WignerGrid radon_inverse(std::span<const CharacteristicSlice> slices, const UniformAxis& i_axis,
                         const UniformAxis& v_axis);

} // namespace tomocirc

#endif
