#include "tomocirc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace tomocirc::io {

namespace {

std::string join(const std::string& context, const std::string& key) {
    return context.empty() ? key : context + "." + key;
}

const Json& require(const Json& object, const char* key, const std::string& context) {
    if (!object.is_object()) throw ValidationError(context, "expected a JSON object");
    const auto it = object.find(key);
    if (it == object.end()) throw ValidationError(join(context, key), "missing");
    return *it;
}

double as_number(const Json& value, const std::string& field) {
    if (!value.is_number()) throw ValidationError(field, "expected a number");
    return value.get<double>();
}

std::vector<double> as_numbers(const Json& value, const std::string& field) {
    if (!value.is_array()) throw ValidationError(field, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& v : value) out.push_back(as_number(v, field));
    return out;
}

std::string as_string(const Json& value, const std::string& field) {
    if (!value.is_string()) throw ValidationError(field, "expected a string");
    return value.get<std::string>();
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out << ',';
        out << format_double(v);
        first = false;
    }
    out << '\n';
}

DriveCurrent drive_from_json(const Json& j, const std::string& context) {
    const std::string kind = as_string(require(j, "kind", context), join(context, "kind"));
    if (kind == "constant") {
        require_known_keys(j, {"kind", "value"}, context);
        return DriveCurrent::constant(get_number(j, "value", context));
    }
    if (kind == "cosine") {
        require_known_keys(j, {"kind", "amplitude", "frequency", "phase"}, context);
        return DriveCurrent::cosine(get_number(j, "amplitude", context),
                                    get_number(j, "frequency", context),
                                    get_number_or(j, "phase", 0.0, context));
    }
    if (kind == "tabulated") {
        require_known_keys(j, {"kind", "t", "value"}, context);
        return DriveCurrent::tabulated(as_numbers(require(j, "t", context), join(context, "t")),
                                       as_numbers(require(j, "value", context), join(context, "value")));
    }
    throw ValidationError(join(context, "kind"), "unknown drive kind '" + kind + "'");
}

} // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

void require_known_keys(const Json& object, std::initializer_list<const char*> allowed,
                        const std::string& context) {
    if (!object.is_object()) throw ValidationError(context, "expected a JSON object");
    for (const auto& item : object.items()) {
        bool known = false;
        for (const char* key : allowed) known = known || item.key() == key;
        if (!known) throw ValidationError(join(context, item.key()), "unknown key");
    }
}

double get_number(const Json& object, const char* key, const std::string& context) {
    return as_number(require(object, key, context), join(context, key));
}

double get_number_or(const Json& object, const char* key, double fallback, const std::string& context) {
    if (!object.contains(key)) return fallback;
    return get_number(object, key, context);
}

Json state_to_json(const GaussianState& state) {
    Json cov = Json::array();
    for (int i = 0; i < state.dim(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < state.dim(); ++k) row.push_back(state.cov()(i, k));
        cov.push_back(row);
    }
    Json mean = Json::array();
    for (int i = 0; i < state.dim(); ++i) mean.push_back(state.mean()[i]);
    return {{"n_modes", state.n_modes()}, {"mean", mean}, {"cov", cov}};
}

GaussianState state_from_json(const Json& j, const std::string& context) {
    require_known_keys(j, {"n_modes", "mean", "cov"}, context);
    const double n = get_number(j, "n_modes", context);
    if (n != 1.0 && n != 2.0) throw ValidationError(join(context, "n_modes"), "must be 1 or 2");
    const int dim = 2 * static_cast<int>(n);
    const auto mean = as_numbers(require(j, "mean", context), join(context, "mean"));
    if (static_cast<int>(mean.size()) != dim)
        throw ValidationError(join(context, "mean"), "length must be 2 * n_modes");
    const Json& cov_json = require(j, "cov", context);
    if (!cov_json.is_array() || static_cast<int>(cov_json.size()) != dim)
        throw ValidationError(join(context, "cov"), "must be a square array matching n_modes");
    Eigen::MatrixXd cov(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const auto row = as_numbers(cov_json[static_cast<std::size_t>(r)], join(context, "cov"));
        if (static_cast<int>(row.size()) != dim)
            throw ValidationError(join(context, "cov"), "must be a square array matching n_modes");
        for (int c = 0; c < dim; ++c) cov(r, c) = row[static_cast<std::size_t>(c)];
    }
    try {
        return GaussianState(Eigen::Map<const Eigen::VectorXd>(mean.data(), dim), cov);
    } catch (const ValidationError& e) {
        throw ValidationError(join(context, e.field()), e.what());
    }
}

Json frame_to_json(const ReferenceFrame& frame) {
    Json out = Json::array();
    for (const auto& p : frame.pairs()) out.push_back({p.mu, p.nu});
    return out;
}

ReferenceFrame frame_from_json(const Json& j, const std::string& context) {
    if (!j.is_array() || j.empty()) throw ValidationError(context, "expected [[mu, nu], ...]");
    std::vector<FramePair> pairs;
    for (const auto& item : j) {
        const auto values = as_numbers(item, context);
        if (values.size() != 2) throw ValidationError(context, "each frame is a [mu, nu] pair");
        pairs.push_back({values[0], values[1]});
    }
    try {
        return ReferenceFrame(std::move(pairs));
    } catch (const ValidationError& e) {
        throw ValidationError(context, e.what());
    }
}

UniformAxis axis_from_json(const Json& j, const std::string& context) {
    require_known_keys(j, {"min", "max", "count"}, context);
    const double count = get_number(j, "count", context);
    if (count != std::floor(count) || count < 2 || count > 1e7)
        throw ValidationError(join(context, "count"), "must be an integer >= 2");
    UniformAxis axis{get_number(j, "min", context), get_number(j, "max", context),
                     static_cast<int>(count)};
    axis.validate(context.c_str());
    return axis;
}

CoupledCircuitParams circuit_from_json(const Json& j, const std::string& context) {
    require_known_keys(j, {"L", "L12"}, context);
    CoupledCircuitParams params{get_number(j, "L", context), get_number(j, "L12", context)};
    try {
        params.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(join(context, e.field()), e.what());
    }
    return params;
}

FrequencyProfile profile_from_json(const Json& j, const std::string& context) {
    const std::string kind = as_string(require(j, "kind", context), join(context, "kind"));
    FrequencyProfile profile = FrequencyProfile::constant(1.0);
    if (kind == "constant") {
        require_known_keys(j, {"kind", "omega", "drive"}, context);
        profile = FrequencyProfile::constant(get_number(j, "omega", context));
    } else if (kind == "sudden-jump") {
        require_known_keys(j, {"kind", "omega0", "omega1", "t_jump", "drive"}, context);
        profile = FrequencyProfile::sudden_jump(get_number(j, "omega0", context),
                                                get_number(j, "omega1", context),
                                                get_number_or(j, "t_jump", 0.0, context));
    } else if (kind == "periodic") {
        require_known_keys(j, {"kind", "omega0", "depth", "modulation", "drive"}, context);
        profile = FrequencyProfile::periodic(get_number(j, "omega0", context),
                                             get_number(j, "depth", context),
                                             get_number(j, "modulation", context));
    } else if (kind == "tabulated") {
        require_known_keys(j, {"kind", "t", "omega", "drive"}, context);
        profile = FrequencyProfile::tabulated(
            as_numbers(require(j, "t", context), join(context, "t")),
            as_numbers(require(j, "omega", context), join(context, "omega")));
    } else {
        throw ValidationError(join(context, "kind"), "unknown profile kind '" + kind + "'");
    }
    if (j.contains("drive")) profile = profile.with_drive(drive_from_json(j["drive"], join(context, "drive")));
    return profile;
}

Json profile_to_json(const FrequencyProfile& profile) {
    const auto& p = profile.params();
    Json out;
    switch (profile.kind()) {
    case FrequencyProfile::Kind::constant:
        out = {{"kind", "constant"}, {"omega", p[0]}};
        break;
    case FrequencyProfile::Kind::sudden_jump:
        out = {{"kind", "sudden-jump"}, {"omega0", p[0]}, {"omega1", p[1]}, {"t_jump", p[2]}};
        break;
    case FrequencyProfile::Kind::periodic:
        out = {{"kind", "periodic"}, {"omega0", p[0]}, {"depth", p[1]}, {"modulation", p[2]}};
        break;
    case FrequencyProfile::Kind::tabulated:
        out = {{"kind", "tabulated"}, {"t", profile.table_t()}, {"omega", profile.table_omega()}};
        break;
    }
    if (const auto& d = profile.drive()) {
        switch (d->kind()) {
        case DriveCurrent::Kind::constant:
            out["drive"] = {{"kind", "constant"}, {"value", d->params()[0]}};
            break;
        case DriveCurrent::Kind::cosine:
            out["drive"] = {{"kind", "cosine"},
                            {"amplitude", d->params()[0]},
                            {"frequency", d->params()[1]},
                            {"phase", d->params()[2]}};
            break;
        case DriveCurrent::Kind::tabulated:
            out["drive"] = {{"kind", "tabulated"}, {"t", d->table_t()}, {"value", d->table_value()}};
            break;
        }
    }
    return out;
}

Json measure_to_json(const MeasureResult& result) {
    Json out = {{"measure", result.measure},
                {"value", result.value},
                {"method", to_string(result.method)},
                {"error_estimate", result.error_estimate}};
    if (result.frame) out["frame"] = frame_to_json(*result.frame);
    return out;
}

Json slice_to_json(const CharacteristicSlice& slice) {
    Json r = Json::array(), re = Json::array(), im = Json::array();
    for (int k = 0; k < slice.r_axis.count; ++k) {
        r.push_back(slice.r_axis.at(k));
        re.push_back(slice.values[k].real());
        im.push_back(slice.values[k].imag());
    }
    return {{"theta", slice.theta}, {"r", r}, {"re", re}, {"im", im}};
}

CharacteristicSlice slice_from_json(const Json& j) {
    require_known_keys(j, {"theta", "r", "re", "im"}, "slice");
    const auto r = as_numbers(require(j, "r", "slice"), "slice.r");
    const auto re = as_numbers(require(j, "re", "slice"), "slice.re");
    const auto im = as_numbers(require(j, "im", "slice"), "slice.im");
    if (r.size() < 2 || re.size() != r.size() || im.size() != r.size())
        throw ValidationError("slice", "r, re and im must have equal length >= 2");
    UniformAxis axis{r.front(), r.back(), static_cast<int>(r.size())};
    for (std::size_t k = 0; k < r.size(); ++k)
        if (std::abs(axis.at(static_cast<int>(k)) - r[k]) > 1e-9 * std::max(1.0, std::abs(r.back())))
            throw ValidationError("slice.r", "radial axis must be uniform");
    CharacteristicSlice slice{get_number(j, "theta", "slice"), axis, Eigen::VectorXcd(axis.count)};
    for (std::size_t k = 0; k < r.size(); ++k) slice.values[static_cast<Eigen::Index>(k)] = {re[k], im[k]};
    return slice;
}

void write_wigner_csv(std::ostream& out, const WignerGrid& grid) {
    out << "I,V,W\n";
    for (int i = 0; i < grid.i_axis.count; ++i)
        for (int v = 0; v < grid.v_axis.count; ++v)
            write_row(out, {grid.i_axis.at(i), grid.v_axis.at(v), grid.values(i, v)});
}

void write_tomogram_csv(std::ostream& out, const SampledTomogram& tomogram) {
    out << "J,w\n";
    for (int n = 0; n < tomogram.j_axis.count; ++n)
        write_row(out, {tomogram.j_axis.at(n), tomogram.density[n]});
}

void write_tomogram_csv(std::ostream& out, const GaussianTomogram& tomogram, const UniformAxis& j1,
                        const UniformAxis& j2) {
    out << "J1,J2,w\n";
    Eigen::VectorXd j(2);
    for (int a = 0; a < j1.count; ++a)
        for (int b = 0; b < j2.count; ++b) {
            j << j1.at(a), j2.at(b);
            write_row(out, {j[0], j[1], tomogram_density(tomogram, j)});
        }
}

void write_trajectory_csv(std::ostream& out, const EpsilonTrajectory& traj) {
    out << kTrajectoryHeader << '\n';
    const auto quanta = casimir_quanta_curve(traj);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto state = state_from_epsilon(traj, k);
        write_row(out, {traj.t[k], traj.eps[k].real(), traj.eps[k].imag(), traj.eps_dot[k].real(),
                        traj.eps_dot[k].imag(), state.cov()(0, 0), state.cov()(1, 1),
                        state.cov()(0, 1), state.mean()[0], state.mean()[1], quanta[k]});
    }
}

void write_moment_csv(std::ostream& out, const std::vector<double>& times,
                      const std::vector<GaussianState>& states) {
    out << kMomentHeader << '\n';
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto& c = states[k].cov();
        write_row(out, {times[k], c(0, 0), c(1, 1), c(0, 1), c(2, 2), c(3, 3), c(2, 3), c(0, 2),
                        c(1, 3), c(0, 3), c(2, 1)});
    }
}

std::vector<std::vector<double>> read_csv(std::istream& in, const std::string& expected_header,
                                          const std::string& context) {
    std::string line;
    if (!std::getline(in, line) || line != expected_header)
        throw ValidationError(context, "unexpected CSV header");
    const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',') + 1);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p <= end) {
            const char* comma = std::find(p, end, ',');
            double value = 0.0;
            const auto r = std::from_chars(p, comma, value);
            if (r.ec != std::errc() || r.ptr != comma)
                throw ValidationError(context, "malformed number in row " + std::to_string(rows.size() + 1));
            row.push_back(value);
            p = comma + 1;
        }
        if (row.size() != columns)
            throw ValidationError(context, "wrong column count in row " + std::to_string(rows.size() + 1));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ValidationError(context, "no data rows");
    return rows;
}

GaussianState state_from_trajectory_csv(std::istream& in, double t) {
    const auto rows = read_csv(in, kTrajectoryHeader, "trajectory");
    std::size_t best = 0;
    for (std::size_t k = 1; k < rows.size(); ++k)
        if (std::abs(rows[k][0] - t) < std::abs(rows[best][0] - t)) best = k;
    const auto& r = rows[best];
    Eigen::Matrix2d cov;
    cov << r[5], r[7], r[7], r[6];
    return {Eigen::Vector2d(r[8], r[9]), cov};
}

} // namespace tomocirc::io
