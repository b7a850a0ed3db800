#pragma once

#include <stdexcept>
#include <string>

namespace tccm {

// Base of every error the library throws. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration or flag value.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation (e.g. t_fixed > 1).
class DomainError : public Error {
public:
    using Error::Error;
};

// Shapes that do not conform.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Malformed input file or incompatible data.
class DataFormatError : public Error {
public:
    using Error::Error;
};

// Non-finite values, failed convergence.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Metric undefined for the given labels (e.g. a single class).
class MetricError : public Error {
public:
    using Error::Error;
};

}  // namespace tccm
