#ifndef TOMOCIRC_AXIS_HPP
#define TOMOCIRC_AXIS_HPP

#include <cmath>

#include "tomocirc/errors.hpp"

namespace tomocirc {

/// Uniformly spaced, closed interval [min, max] with `count` nodes.
struct UniformAxis {
    double min = 0.0;
    double max = 1.0;
    int count = 2;

    double step() const { return (max - min) / (count - 1); }
    double at(int i) const { return i == count - 1 ? max : min + i * step(); }
    double width() const { return max - min; }

    /// Fractional node index of x (may lie outside [0, count-1]).
    double index_of(double x) const { return (x - min) / step(); }

    void validate(const char* field, int min_count = 2) const {
        if (!std::isfinite(min) || !std::isfinite(max) || !(max > min))
            throw ValidationError(field, "axis must be finite and strictly increasing");
        if (count < min_count)
            throw ValidationError(field, "axis needs at least " + std::to_string(min_count) + " nodes");
    }
};

/// Trapezoidal weight of node i on an axis (step times 1 or 1/2 at the ends).
inline double trapezoid_weight(const UniformAxis& axis, int i) {
    return (i == 0 || i == axis.count - 1) ? 0.5 * axis.step() : axis.step();
}

} // namespace tomocirc

#endif
