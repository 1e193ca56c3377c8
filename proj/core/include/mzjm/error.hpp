#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mzjm {

enum class ErrorKind {
    NotHermitian,
    NoConvergence,
    DimensionMismatch,
    BadDimension,
    InvalidState,
    NotUnitary,
    InvalidEffect,
    InvalidStrategy,
    InvalidInstance,
    NotMeasurable,
    DegenerateDirection,
    DegenerateFidelity,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every precondition failure in the library is reported through this type.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace mzjm
