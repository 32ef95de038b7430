#ifndef TOMOCIRC_IO_HPP
#define TOMOCIRC_IO_HPP

// JSON and CSV formats. Doubles are written with 17 significant digits in
// the C locale so that files round-trip exactly.

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tomocirc/coupled_circuits.hpp"
#include "tomocirc/gaussian_core.hpp"
#include "tomocirc/info_measures.hpp"
#include "tomocirc/josephson.hpp"
#include "tomocirc/tomography.hpp"

namespace tomocirc::io {

using Json = nlohmann::json;

std::string format_double(double value);

/// Rejects keys of `object` not listed in `allowed`; `context` prefixes the field name.
void require_known_keys(const Json& object, std::initializer_list<const char*> allowed,
                        const std::string& context);

double get_number(const Json& object, const char* key, const std::string& context);
double get_number_or(const Json& object, const char* key, double fallback, const std::string& context);

// {"n_modes": n, "mean": [...], "cov": [[...], ...]}
Json state_to_json(const GaussianState& state);
GaussianState state_from_json(const Json& j, const std::string& context = "state");

// [[mu, nu]] or [[mu1, nu1], [mu2, nu2]]
Json frame_to_json(const ReferenceFrame& frame);
ReferenceFrame frame_from_json(const Json& j, const std::string& context = "frames");

// {"min": a, "max": b, "count": n}
UniformAxis axis_from_json(const Json& j, const std::string& context);

// {"L": x, "L12": y}
CoupledCircuitParams circuit_from_json(const Json& j, const std::string& context = "circuit");

// {"kind": "constant" | "sudden-jump" | "periodic" | "tabulated", params..., "drive": {...}}
FrequencyProfile profile_from_json(const Json& j, const std::string& context = "profile");
Json profile_to_json(const FrequencyProfile& profile);

// {"measure": name, "value": v, "method": m, "error_estimate": e, "frame": [...]}
Json measure_to_json(const MeasureResult& result);

// {"theta": t, "r": [...], "re": [...], "im": [...]}
Json slice_to_json(const CharacteristicSlice& slice);
CharacteristicSlice slice_from_json(const Json& j);

/// "I,V,W", one row per node, I-major.
void write_wigner_csv(std::ostream& out, const WignerGrid& grid);
/// "J,w".
void write_tomogram_csv(std::ostream& out, const SampledTomogram& tomogram);
/// "J1,J2,w" on the product of two axes.
void write_tomogram_csv(std::ostream& out, const GaussianTomogram& tomogram, const UniformAxis& j1,
                        const UniformAxis& j2);

inline constexpr const char* kTrajectoryHeader =
    "t,re_eps,im_eps,re_epsdot,im_epsdot,sigma_II,sigma_VV,sigma_IV,mean_I,mean_V,n_quanta";
inline constexpr const char* kMomentHeader =
    "t,s_I1I1,s_V1V1,s_I1V1,s_I2I2,s_V2V2,s_I2V2,s_I1I2,s_V1V2,s_I1V2,s_I2V1";

void write_trajectory_csv(std::ostream& out, const EpsilonTrajectory& traj);
void write_moment_csv(std::ostream& out, const std::vector<double>& times,
                      const std::vector<GaussianState>& states);

/// Rows of a numeric CSV with the given header; throws ValidationError on mismatch.
std::vector<std::vector<double>> read_csv(std::istream& in, const std::string& expected_header,
                                          const std::string& context);

/// Gaussian state stored in the trajectory CSV row whose t is closest to `t`.
GaussianState state_from_trajectory_csv(std::istream& in, double t);

} // namespace tomocirc::io

#endif
