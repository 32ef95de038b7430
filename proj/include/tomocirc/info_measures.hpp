#ifndef TOMOCIRC_INFO_MEASURES_HPP
#define TOMOCIRC_INFO_MEASURES_HPP

// Tomographic entropy, tomographic (mutual) information, purity and fidelity.
//
// Every measure is available two ways: Method::quadrature integrates the
// tomogram-level definition numerically, Method::closed_form uses the
// Gaussian formula. The two are independent routes and are compared in tests.

#include <optional>
#include <string>

#include "tomocirc/gaussian_core.hpp"

namespace tomocirc {

enum class Method { quadrature, closed_form };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

struct MeasureResult {
    std::string measure;
    double value = 0.0;
    Method method = Method::closed_form;
    std::optional<ReferenceFrame> frame;
    double error_estimate = 0.0;
};

/// -integral w ln w dJ for a one-mode state at the given frame.
MeasureResult entropy_1mode(const GaussianState& state, const ReferenceFrame& frame, Method method);

/// -integral w ln w dJ1 dJ2 for a two-mode state at the given pair of frames.
MeasureResult entropy_2mode(const GaussianState& state, const ReferenceFrame& frames, Method method);

/// Dispatches on the mode count.
MeasureResult entropy(const GaussianState& state, const ReferenceFrame& frames, Method method);

/// Kullback-Leibler divergence of the joint two-mode tomogram from the product of its marginals.
MeasureResult tomographic_information(const GaussianState& state, const ReferenceFrame& frames,
                                      Method method);

/// Marginal w_m(J) of a two-mode Gaussian tomogram (closed form).
double marginal_density(const GaussianTomogram& tomogram, int mode, double j);

/// Marginal w_m(J) obtained by integrating the joint density over the other J.
double marginal_density_quadrature(const GaussianTomogram& tomogram, int mode, double j);

/// Tr(rho^2).
MeasureResult purity(const GaussianState& state, Method method);

/// Hilbert-Schmidt overlap Tr(rho1 rho2).
///
/// The quadrature route evaluates (2 pi)^-n integral chi1(k) chi2(-k) dk, where
/// chi(k) = integral w(J; k) exp(iJ) dJ is the tomogram's characteristic
/// function at frame k (for two modes J = J1 + J2 and k = (mu1, nu1, mu2, nu2)).
MeasureResult fidelity(const GaussianState& first, const GaussianState& second, Method method);

enum class BoundsStatus { ok, violated };

inline constexpr double kBoundsTolerance = 1e-9;

/// Fidelity and purity must lie in [0, 1] up to kBoundsTolerance.
BoundsStatus bounds_check(const MeasureResult& result);

} // namespace tomocirc

#endif
