#pragma once

#include <stdexcept>
#include <string>

namespace ststoa {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: scenario fields, grid descriptors, potential segments.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Failures that come from the numbers rather than from the input shape.
/// The CLI maps every subclass to exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Energy/time sampling too coarse for the requested time window (aliasing).
class GridTooCoarse : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// No detectable particle at the detector: arrival probability below 1e-300.
class ZeroArrival : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Evanescent growth exponent above the overflow guard (backward propagation
/// through a forbidden region).
class DivergenceWarning : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A position query sits exactly on a potential segment edge.
class BoundaryAmbiguity : public Error {
public:
    using Error::Error;
};

/// Two distributions sampled on different time grids.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// Grid-solver configuration violates its resolution or step-size invariants.
class UnstableConfig : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// File output failed; the message names the path.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace ststoa
