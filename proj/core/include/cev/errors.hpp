#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cev {

// Raised when a series or iteration exhausts its term budget before meeting
// its tolerance.
class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid model input. `field()` names the offending parameter so callers can
// report `<field>: <reason>`.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& reason)
        : std::invalid_argument(field + ": " + reason), field_(std::move(field)), reason_(reason) {}

    const std::string& field() const noexcept { return field_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string field_;
    std::string reason_;
};

}  // namespace cev
