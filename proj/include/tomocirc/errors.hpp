#ifndef TOMOCIRC_ERRORS_HPP
#define TOMOCIRC_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace tomocirc {

/// An input violated a documented precondition. `field()` names the offending input.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A numerical procedure failed (non-convergence, step-size collapse, singular matrix).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tomocirc

#endif
