#pragma once

#include <stdexcept>

namespace nowcast {

/// Value outside the mathematical domain of an operation
/// (division by zero, vacuous bound, probability outside [0,1], ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Mismatched lengths or empty inputs.
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration value; the message names the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Series to be compared share no usable range.
struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nowcast
