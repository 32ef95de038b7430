#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "tomocirc/coupled_circuits.hpp"
#include "tomocirc/errors.hpp"
#include "tomocirc/info_measures.hpp"
#include "tomocirc/josephson.hpp"
#include "tomocirc/parallel.hpp"
#include "tomocirc/sampling.hpp"
#include "tomocirc/tomography.hpp"

namespace tomocirc::cli {

namespace {

using io::Json;
namespace fs = std::filesystem;

Json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError("config", std::string("invalid JSON: ") + e.what());
    }
}

std::ofstream open_output(const Options& options, const std::string& name) {
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    std::ofstream out(options.out_dir / name, std::ios::binary);
    if (!out) throw ValidationError("out", "cannot write '" + (options.out_dir / name).string() + "'");
    return out;
}

void write_json_file(const Options& options, const std::string& name, const Json& value) {
    auto out = open_output(options, name);
    out << value.dump(2) << '\n';
}

int get_count(const Json& config, const char* key, int fallback, int min_value) {
    const double v = io::get_number_or(config, key, fallback, "");
    if (v != std::floor(v) || v < min_value || v > 1e7)
        throw ValidationError(key, "must be an integer >= " + std::to_string(min_value));
    return static_cast<int>(v);
}

double get_positive(const Json& config, const char* key, std::optional<double> fallback) {
    const double v = fallback ? io::get_number_or(config, key, *fallback, "") : io::get_number(config, key, "");
    if (!std::isfinite(v) || v <= 0.0) throw ValidationError(key, "must be a positive finite number");
    return v;
}

Json vector_json(const Eigen::VectorXd& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Json matrix_json(const Eigen::MatrixXd& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

/// A state is given inline ({"n_modes", "mean", "cov"}), as a row of a
/// trajectory CSV ({"trajectory": path, "t": x}), or as the propagated
/// coupled-circuit ground state ({"circuit": {"L", "L12"}, "t": x}).
GaussianState resolve_state(const Json& j, const std::string& context) {
    if (!j.is_object()) throw ValidationError(context, "expected a JSON object");
    if (j.contains("trajectory")) {
        io::require_known_keys(j, {"trajectory", "t"}, context);
        if (!j["trajectory"].is_string()) throw ValidationError(context + ".trajectory", "expected a path");
        const double t = io::get_number(j, "t", context);
        if (!std::isfinite(t)) throw ValidationError(context + ".t", "must be finite");
        std::ifstream in(j["trajectory"].get<std::string>());
        if (!in) throw ValidationError(context + ".trajectory", "cannot open file");
        return io::state_from_trajectory_csv(in, t);
    }
    if (j.contains("circuit")) {
        io::require_known_keys(j, {"circuit", "t"}, context);
        const auto params = io::circuit_from_json(j["circuit"], context + ".circuit");
        const double t = io::get_number(j, "t", context);
        if (!std::isfinite(t) || t < 0.0) throw ValidationError(context + ".t", "must be >= 0");
        return propagate_dispersions(params, vacuum_state<double>(2), t);
    }
    return io::state_from_json(j, context);
}

const Json& require_key(const Json& config, const char* key) {
    if (!config.contains(key)) throw ValidationError(key, "missing");
    return config[key];
}

UniformAxis default_axis(double mean, double variance, int count) {
    const double half = 8.0 * std::sqrt(variance);
    return {mean - half, mean + half, count};
}

// --- tomogram -------------------------------------------------------------

} // namespace

int cmd_tomogram(const Json& config, const Options& options, std::ostream& out) {
    io::require_known_keys(config, {"state", "frames", "J_axis", "J2_axis"}, "");
    const auto state = resolve_state(require_key(config, "state"), "state");
    const auto frame = io::frame_from_json(require_key(config, "frames"), "frames");
    const auto stats = quadrature_stats(state, frame);

    Json summary = {{"n_modes", state.n_modes()},
                    {"frames", io::frame_to_json(frame)},
                    {"mean", vector_json(stats.mean_j)},
                    {"covariance", matrix_json(stats.cov_j)},
                    {"entropy", entropy(state, frame, Method::closed_form).value}};

    if (state.n_modes() == 1) {
        if (config.contains("J2_axis")) throw ValidationError("J2_axis", "only valid for two-mode states");
        const auto axis = config.contains("J_axis") ? io::axis_from_json(config["J_axis"], "J_axis")
                                                    : default_axis(stats.mean_j[0], stats.cov_j(0, 0), 401);
        SampledTomogram sampled{frame, axis, Eigen::VectorXd(axis.count)};
        for (int i = 0; i < axis.count; ++i) sampled.density[i] = tomogram_density(stats, axis.at(i));
        Eigen::Index peak = 0;
        sampled.density.maxCoeff(&peak);
        summary["variance"] = stats.cov_j(0, 0);
        summary["peak"] = {{"J", axis.at(static_cast<int>(peak))}, {"w", sampled.density[peak]}};
        if (options.format == OutputFormat::csv) {
            auto file = open_output(options, "tomogram.csv");
            io::write_tomogram_csv(file, sampled);
        } else {
            Json j = Json::array(), w = Json::array();
            for (int i = 0; i < axis.count; ++i) {
                j.push_back(axis.at(i));
                w.push_back(sampled.density[i]);
            }
            write_json_file(options, "tomogram.json", {{"J", j}, {"w", w}});
        }
    } else {
        const auto j1 = config.contains("J_axis") ? io::axis_from_json(config["J_axis"], "J_axis")
                                                  : default_axis(stats.mean_j[0], stats.cov_j(0, 0), 101);
        const auto j2 = config.contains("J2_axis") ? io::axis_from_json(config["J2_axis"], "J2_axis")
                                                   : default_axis(stats.mean_j[1], stats.cov_j(1, 1), 101);
        summary["variance"] = {stats.cov_j(0, 0), stats.cov_j(1, 1)};
        summary["information"] = tomographic_information(state, frame, Method::closed_form).value;
        if (options.format == OutputFormat::csv) {
            auto file = open_output(options, "tomogram.csv");
            io::write_tomogram_csv(file, stats, j1, j2);
        } else {
            Json rows = Json::array();
            Eigen::VectorXd point(2);
            for (int a = 0; a < j1.count; ++a)
                for (int b = 0; b < j2.count; ++b) {
                    point << j1.at(a), j2.at(b);
                    rows.push_back({point[0], point[1], tomogram_density(stats, point)});
                }
            write_json_file(options, "tomogram.json", {{"columns", {"J1", "J2", "w"}}, {"rows", rows}});
        }
    }
    write_json_file(options, "summary.json", summary);
    out << summary.dump() << '\n';
    return ok;
}

// --- wigner ----------------------------------------------------------------

namespace {

struct RoundTrip {
    WignerGrid reconstructed;
    double max_abs_error = 0.0;
};

RoundTrip radon_round_trip(const GaussianState& state, const UniformAxis& i_axis, const UniformAxis& v_axis,
                           const UniformAxis& j_axis, int angles, int r_count) {
    const auto exact = wigner_of_gaussian(state, i_axis, v_axis);
    const double nyquist = std::numbers::pi / std::min(i_axis.step(), v_axis.step());
    const UniformAxis r_axis{0.0, nyquist, r_count};
    std::vector<CharacteristicSlice> slices(static_cast<std::size_t>(angles));
    parallel_for(slices.size(), [&](std::size_t k) {
        const double theta = static_cast<double>(k) * std::numbers::pi / angles;
        slices[k] = characteristic_slice(radon_forward(exact, ReferenceFrame::optical(theta), j_axis), r_axis);
    });
    RoundTrip result{radon_inverse(slices, i_axis, v_axis)};
    result.max_abs_error = (result.reconstructed.values - exact.values).cwiseAbs().maxCoeff();
    return result;
}

void write_grid(const Options& options, const WignerGrid& grid) {
    if (options.format == OutputFormat::csv) {
        auto file = open_output(options, "wigner.csv");
        io::write_wigner_csv(file, grid);
        return;
    }
    Json rows = Json::array();
    for (int a = 0; a < grid.i_axis.count; ++a)
        for (int b = 0; b < grid.v_axis.count; ++b)
            rows.push_back({grid.i_axis.at(a), grid.v_axis.at(b), grid.values(a, b)});
    write_json_file(options, "wigner.json", {{"columns", {"I", "V", "W"}}, {"rows", rows}});
}

} // namespace

int cmd_wigner(const Json& config, const Options& options, std::ostream& out) {
    io::require_known_keys(config, {"state", "I_axis", "V_axis", "J_axis", "method", "angles", "r_count"}, "");
    const auto state = resolve_state(require_key(config, "state"), "state");
    if (state.n_modes() != 1) throw ValidationError("state", "wigner needs a one-mode state");
    const auto i_axis = io::axis_from_json(require_key(config, "I_axis"), "I_axis");
    const auto v_axis = io::axis_from_json(require_key(config, "V_axis"), "V_axis");

    std::string method = config.value("method", std::string("analytic"));
    if (options.method) method = *options.method;

    Json summary = {{"method", method}};
    WignerGrid grid;
    if (method == "analytic") {
        for (const char* key : {"J_axis", "angles", "r_count"})
            if (config.contains(key)) throw ValidationError(key, "only used by method 'radon'");
        grid = wigner_of_gaussian(state, i_axis, v_axis);
    } else if (method == "radon") {
        const int angles = get_count(config, "angles", 64, kMinAngularSlices);
        const int r_count = get_count(config, "r_count", std::max(i_axis.count, v_axis.count), 2);
        const double reach = std::max({std::abs(i_axis.min), std::abs(i_axis.max), std::abs(v_axis.min),
                                       std::abs(v_axis.max)});
        const auto j_axis = config.contains("J_axis")
                                ? io::axis_from_json(config["J_axis"], "J_axis")
                                : UniformAxis{-reach, reach, std::max(i_axis.count, v_axis.count)};
        auto trip = radon_round_trip(state, i_axis, v_axis, j_axis, angles, r_count);
        grid = std::move(trip.reconstructed);
        summary["angles"] = angles;
        summary["r_count"] = r_count;
        summary["max_abs_error"] = trip.max_abs_error;
    } else {
        throw ValidationError("method", "wigner method must be 'analytic' or 'radon'");
    }
    const auto [peak_i, peak_v] = grid.argmax();
    summary["integral"] = grid.integral();
    summary["argmax"] = {peak_i, peak_v};
    write_grid(options, grid);
    write_json_file(options, "summary.json", summary);
    out << summary.dump() << '\n';
    return ok;
}

// --- josephson -------------------------------------------------------------

namespace {

/// Trapezoidal mean of `values` over the samples in [t0, t1].
double window_average(const std::vector<double>& t, const std::vector<double>& values, double t0) {
    double area = 0.0, span = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (t[k - 1] < t0) continue;
        const double dt = t[k] - t[k - 1];
        area += 0.5 * dt * (values[k] + values[k - 1]);
        span += dt;
    }
    return span > 0.0 ? area / span : values.back();
}

} // namespace

int cmd_josephson(const Json& config, const Options& options, std::ostream& out) {
    io::require_known_keys(config, {"profile", "t_final", "tol", "samples"}, "");
    const auto profile = io::profile_from_json(require_key(config, "profile"), "profile");
    const double t_final = get_positive(config, "t_final", std::nullopt);
    const double tol = options.tol ? *options.tol : get_positive(config, "tol", 1e-10);
    if (!(tol >= kMinTolerance && tol <= kMaxTolerance))
        throw ValidationError("tol", "must lie in [1e-12, 1e-6]");
    const int samples = get_count(config, "samples", 1001, 2);
    profile.validate(t_final);

    const auto traj = evolve_epsilon(profile, t_final, tol, samples);
    const auto quanta = casimir_quanta_curve(traj);

    double det_deviation = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k)
        det_deviation = std::max(det_deviation, std::abs(state_from_epsilon(traj, k).cov().determinant() - 0.25));

    const double period = 2.0 * std::numbers::pi / traj.omega.back();
    const double window_start = std::max(0.0, t_final - 10.0 * period);
    const Json summary = {{"profile", io::profile_to_json(profile)},
                          {"t_final", t_final},
                          {"tol", tol},
                          {"samples", samples},
                          {"final_quanta", quanta.back()},
                          {"averaged_quanta", window_average(traj.t, quanta, window_start)},
                          {"averaging_window", {window_start, t_final}},
                          {"final_wronskian_drift", traj.wronskian_error(traj.size() - 1)},
                          {"max_wronskian_drift", traj.max_wronskian_error()},
                          {"max_det_deviation", det_deviation}};

    if (options.format == OutputFormat::csv) {
        auto file = open_output(options, "trajectory.csv");
        io::write_trajectory_csv(file, traj);
    } else {
        Json rows = Json::array();
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const auto state = state_from_epsilon(traj, k);
            rows.push_back({traj.t[k], traj.eps[k].real(), traj.eps[k].imag(), traj.eps_dot[k].real(),
                            traj.eps_dot[k].imag(), state.cov()(0, 0), state.cov()(1, 1), state.cov()(0, 1),
                            state.mean()[0], state.mean()[1], quanta[k]});
        }
        Json columns = Json::array();
        std::stringstream header(io::kTrajectoryHeader);
        for (std::string name; std::getline(header, name, ',');) columns.push_back(name);
        write_json_file(options, "trajectory.json", {{"columns", columns}, {"rows", rows}});
    }
    write_json_file(options, "summary.json", summary);
    out << summary.dump() << '\n';
    return ok;
}

// --- coupled ---------------------------------------------------------------

int cmd_coupled(const Json& config, const Options& options, std::ostream& out) {
    io::require_known_keys(config, {"circuit", "sigma0", "t_final", "samples", "method"}, "");
    const auto params = io::circuit_from_json(require_key(config, "circuit"), "circuit");
    const auto sigma0 = config.contains("sigma0") ? io::state_from_json(config["sigma0"], "sigma0")
                                                  : vacuum_state<double>(2);
    if (sigma0.n_modes() != 2) throw ValidationError("sigma0", "must be a two-mode state");
    if (!physicality_check(sigma0).physical) throw ValidationError("sigma0", "state is not physical");
    const double t_final = get_positive(config, "t_final", std::nullopt);
    const int samples = get_count(config, "samples", 201, 2);

    std::string method = config.value("method", std::string("appendix"));
    if (options.method) method = *options.method;
    if (method != "appendix" && method != "oracle")
        throw ValidationError("method", "coupled method must be 'appendix' or 'oracle'");

    const UniformAxis times{0.0, t_final, samples};
    std::vector<double> t(static_cast<std::size_t>(samples));
    std::vector<GaussianState> states;
    states.reserve(t.size());
    for (int k = 0; k < samples; ++k) {
        t[k] = times.at(k);
        states.push_back(method == "appendix" ? propagate_dispersions(params, sigma0, t[k])
                                              : symplectic_oracle(params, sigma0, t[k]));
    }

    const double purity0 = purity(sigma0, Method::closed_form).value;
    double purity_drift = 0.0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& s : states) {
        purity_drift = std::max(purity_drift, std::abs(purity(s, Method::closed_form).value - purity0));
        min_margin = std::min(min_margin, physicality_check(s).margin);
    }
    const auto [omega_k, omega_s] = normal_mode_frequencies<double>(params);
    const Json summary = {{"method", method},
                          {"omega_k", omega_k},
                          {"omega_s", omega_s},
                          {"t_final", t_final},
                          {"samples", samples},
                          {"final_state", io::state_to_json(states.back())},
                          {"max_purity_drift", purity_drift},
                          {"min_physicality_margin", min_margin}};

    if (options.format == OutputFormat::csv) {
        auto file = open_output(options, "moments.csv");
        io::write_moment_csv(file, t, states);
    } else {
        Json rows = Json::array();
        for (std::size_t k = 0; k < t.size(); ++k)
            rows.push_back({{"t", t[k]}, {"state", io::state_to_json(states[k])}});
        write_json_file(options, "moments.json", rows);
    }
    write_json_file(options, "summary.json", summary);
    out << summary.dump() << '\n';
    return ok;
}

// --- measures --------------------------------------------------------------

int cmd_measures(const Json& config, const Options& options, std::ostream& out) {
    io::require_known_keys(config, {"state", "state2", "frames", "measures", "method"}, "");
    const auto state = resolve_state(require_key(config, "state"), "state");
    std::optional<GaussianState> state2;
    if (config.contains("state2")) state2 = resolve_state(config["state2"], "state2");
    std::optional<ReferenceFrame> frame;
    if (config.contains("frames")) frame = io::frame_from_json(config["frames"], "frames");

    std::string method = config.value("method", std::string("closed-form"));
    if (options.method) method = *options.method;
    std::vector<Method> methods;
    if (method == "both") methods = {Method::closed_form, Method::quadrature};
    else methods = {method_from_string(method)};

    std::vector<std::string> names;
    if (config.contains("measures")) {
        if (!config["measures"].is_array()) throw ValidationError("measures", "expected an array of names");
        for (const auto& m : config["measures"]) {
            if (!m.is_string()) throw ValidationError("measures", "expected an array of names");
            names.push_back(m.get<std::string>());
        }
    } else {
        if (frame) names.push_back("entropy");
        if (frame && state.n_modes() == 2) names.push_back("information");
        names.push_back("purity");
        if (state2) names.push_back("fidelity");
    }

    const auto compute = [&](const std::string& name, Method m) -> MeasureResult {
        if (name == "entropy" || name == "information") {
            if (!frame) throw ValidationError("frames", name + " needs frames");
            return name == "entropy" ? entropy(state, *frame, m) : tomographic_information(state, *frame, m);
        }
        if (name == "purity") return purity(state, m);
        if (name == "fidelity") {
            if (!state2) throw ValidationError("state2", "fidelity needs a second state");
            return fidelity(state, *state2, m);
        }
        throw ValidationError("measures", "unknown measure '" + name + "'");
    };

    Json results = Json::array();
    for (const auto& name : names) {
        std::vector<MeasureResult> values;
        for (Method m : methods) values.push_back(compute(name, m));
        if (values.size() == 1) {
            results.push_back(io::measure_to_json(values[0]));
        } else {
            results.push_back({{"measure", name},
                               {"closed_form", io::measure_to_json(values[0])},
                               {"quadrature", io::measure_to_json(values[1])},
                               {"delta", values[1].value - values[0].value}});
        }
    }
    const Json report = {{"method", method}, {"results", results}};
    write_json_file(options, "measures.json", report);
    out << report.dump() << '\n';
    return ok;
}

// --- verify ----------------------------------------------------------------

namespace {

struct SweepCase {
    CoupledCircuitParams params;
    double t = 0.0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

struct SweepOutcome {
    double moment_error = 0.0;
    double purity_drift = 0.0;
    double margin = 0.0;
    bool valid = true;  // false when the appendix output is not a covariance matrix
};

std::string pass_fail(bool pass) { return pass ? "PASS" : "FAIL"; }

} // namespace

int cmd_verify(const Json& config, const Options& options, std::ostream& out) {
    io::require_known_keys(config, {"seed", "cases", "tolerance", "round_trip", "grid", "angles"}, "");
    std::uint64_t seed = 20240521;
    if (config.contains("seed")) {
        if (!config["seed"].is_number_unsigned()) throw ValidationError("seed", "must be a non-negative integer");
        seed = config["seed"].get<std::uint64_t>();
    }
    if (options.seed) seed = *options.seed;
    const int cases = get_count(config, "cases", 500, 1);
    const double tolerance = options.tol ? *options.tol : get_positive(config, "tolerance", 1e-9);
    if (!std::isfinite(tolerance) || tolerance <= 0.0) throw ValidationError("tol", "must be positive");
    bool round_trip = true;
    if (config.contains("round_trip")) {
        if (!config["round_trip"].is_boolean()) throw ValidationError("round_trip", "expected true or false");
        round_trip = config["round_trip"].get<bool>();
    }
    const int grid = get_count(config, "grid", 257, kMinGridNodes);
    const int angles = get_count(config, "angles", 64, kMinAngularSlices);

    // Draw every case up front so the sequence depends on the seed alone.
    Random rng(seed);
    std::vector<SweepCase> sweep;
    sweep.reserve(static_cast<std::size_t>(cases));
    for (int c = 0; c < cases; ++c) {
        SweepCase item;
        item.params.L = rng.uniform(0.5, 2.0);
        item.params.L12 = rng.uniform(-0.9, 0.9) * item.params.L;
        item.t = rng.uniform(0.0, 20.0);
        const auto sigma0 = random_gaussian_state(2, rng);
        item.mean = sigma0.mean();
        item.cov = sigma0.cov();
        sweep.push_back(std::move(item));
    }

    const bool corrupt = options.corrupt_s_sign;
    std::vector<SweepOutcome> outcomes(sweep.size());
    parallel_for(sweep.size(), [&](std::size_t c) {
        const auto& item = sweep[c];
        const GaussianState sigma0(item.mean, item.cov);
        auto coeffs = propagator_coefficients(item.params, item.t);
        if (corrupt) coeffs.s_plus = -coeffs.s_plus;
        auto& result = outcomes[c];
        try {
            const auto appendix = apply_propagator(coeffs, sigma0);
            const auto oracle = symplectic_oracle(item.params, sigma0, item.t);
            result.moment_error = (appendix.cov() - oracle.cov()).cwiseAbs().maxCoeff();
            result.purity_drift = std::abs(purity(appendix, Method::closed_form).value -
                                           purity(sigma0, Method::closed_form).value);
            result.margin = physicality_check(appendix).margin;
        } catch (const ValidationError&) {
            result.valid = false;
        }
    });

    SweepOutcome worst{0.0, 0.0, std::numeric_limits<double>::infinity()};
    const auto invalid = std::count_if(outcomes.begin(), outcomes.end(), [](const SweepOutcome& o) { return !o.valid; });
    for (const auto& o : outcomes) {
        if (!o.valid) continue;
        worst.moment_error = std::max(worst.moment_error, o.moment_error);
        worst.purity_drift = std::max(worst.purity_drift, o.purity_drift);
        worst.margin = std::min(worst.margin, o.margin);
    }

    std::ostringstream report;
    bool all_pass = true;
    const auto line = [&](const std::string& name, bool pass, const std::string& detail) {
        all_pass = all_pass && pass;
        report << name << ": " << pass_fail(pass) << ' ' << detail << '\n';
    };
    report << "verify seed=" << seed << " cases=" << cases << (corrupt ? " corrupt-s-sign" : "") << '\n';
    line("appendix-vs-oracle", invalid == 0 && worst.moment_error <= tolerance,
         "worst_moment_error=" + io::format_double(worst.moment_error) + " tol=" + io::format_double(tolerance) +
             " invalid_cases=" + std::to_string(invalid));
    line("physicality", worst.margin >= -kPhysicalityTolerance,
         "min_margin=" + io::format_double(worst.margin));
    line("purity-preservation", worst.purity_drift <= tolerance,
         "worst_purity_drift=" + io::format_double(worst.purity_drift));

    if (round_trip) {
        constexpr double kRoundTripTolerance = 1e-2;
        const UniformAxis axis{-6.0, 6.0, grid};
        Eigen::Matrix2d squeezed;
        squeezed << 0.5 * std::exp(1.0), 0.0, 0.0, 0.5 * std::exp(-1.0);
        const std::vector<std::pair<std::string, GaussianState>> states = {
            {"vacuum", vacuum_state<double>(1)},
            {"squeezed", GaussianState(Eigen::Vector2d::Zero(), squeezed)},
            {"displaced", GaussianState(Eigen::Vector2d(1.0, -0.5), 0.5 * Eigen::Matrix2d::Identity())}};
        for (const auto& [name, state] : states) {
            const auto trip = radon_round_trip(state, axis, axis, axis, angles, grid);
            line("radon-round-trip " + name, trip.max_abs_error < kRoundTripTolerance,
                 "max_abs_error=" + io::format_double(trip.max_abs_error) +
                     " integral=" + io::format_double(trip.reconstructed.integral()));
        }
    }
    report << "overall: " << pass_fail(all_pass) << '\n';

    out << report.str();
    auto file = open_output(options, "verify_report.txt");
    file << report.str();
    return all_pass ? ok : verify_failure;
}

// --- entry point -----------------------------------------------------------

namespace {

std::string error_json(const std::string& kind, const std::string& field, const std::string& message) {
    Json e = {{"error", kind}, {"message", message}};
    if (!field.empty()) e["field"] = field;
    return e.dump();
}

void check_thread_env() {
    const char* env = std::getenv("TOMOCIRC_THREADS");
    if (!env) return;
    const std::string value(env);
    const bool digits = !value.empty() && std::all_of(value.begin(), value.end(), [](char c) {
        return c >= '0' && c <= '9';
    });
    if (!digits || value.size() > 6 || std::stoi(value) < 1)
        throw ValidationError("TOMOCIRC_THREADS", "must be a positive integer");
}

} // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Symplectic tomography of quantum circuits"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<std::string> method;
    std::string format = "csv";
    bool corrupt = false;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "RNG seed (verify)");
    app.add_option("--tol", tol, "tolerance override");
    app.add_option("--method", method, "method override");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));

    using Handler = int (*)(const Json&, const Options&, std::ostream&);
    const std::vector<std::pair<const char*, Handler>> commands = {
        {"tomogram", cmd_tomogram}, {"wigner", cmd_wigner},     {"josephson", cmd_josephson},
        {"coupled", cmd_coupled},   {"measures", cmd_measures}, {"verify", cmd_verify}};
    for (const auto& [name, handler] : commands) app.add_subcommand(name)->fallthrough();
    app.get_subcommand("verify")->add_flag("--corrupt-s-sign", corrupt,
                                           "flip the sign of s_+ in the appendix path");

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return ok;
        } catch (const CLI::ParseError& e) {
            throw ValidationError("arguments", e.what());
        }
        check_thread_env();

        Options options;
        options.out_dir = out_dir;
        options.seed = seed;
        options.tol = tol;
        options.method = method;
        options.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
        options.corrupt_s_sign = corrupt;
        if (tol && !(std::isfinite(*tol) && *tol > 0.0)) throw ValidationError("tol", "must be positive");

        for (const auto& [name, handler] : commands) {
            if (!app.got_subcommand(name)) continue;
            Json config = Json::object();
            if (!config_path.empty()) config = load_config(config_path);
            else if (std::string(name) != "verify") throw ValidationError("config", "--config is required");
            if (!config.is_object()) throw ValidationError("config", "expected a JSON object");
            return handler(config, options, out);
        }
        return validation_failure;
    } catch (const ValidationError& e) {
        err << error_json("validation", e.field(), e.what()) << '\n';
        return validation_failure;
    } catch (const NumericalError& e) {
        err << error_json("numerical", "", e.what()) << '\n';
        return numerical_failure;
    } catch (const Json::exception& e) {
        err << error_json("validation", "config", e.what()) << '\n';
        return validation_failure;
    } catch (const std::logic_error& e) {
        err << error_json("validation", "", e.what()) << '\n';
        return validation_failure;
    } catch (const std::exception& e) {
        err << error_json("numerical", "", e.what()) << '\n';
        return numerical_failure;
    }
}

} // namespace tomocirc::cli
