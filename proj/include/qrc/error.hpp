#pragma once

#include <stdexcept>
#include <string>

namespace qrc {

/// Bad user input: malformed config, out-of-range parameters, mismatched shapes
/// supplied by a caller. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Shape mismatch between matrices handed to a linear-algebra routine.
class DimensionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// A numerical invariant broke at runtime (state drifted off the density-matrix
/// manifold, recurrence diverged, ...). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output could not be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qrc
