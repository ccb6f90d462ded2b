#ifndef DCMA_ERRORS_HPP
#define DCMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dcma {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Incompatible matrix / layer / layout dimensions.
struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Invalid argument values (bad tau, missing regime, K < 2, ...).
struct ArgumentError : Error {
    explicit ArgumentError(const std::string& msg) : Error(msg) {}
};

// Invalid configuration or data that fails validation before any work runs.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Optimization failure (non-finite loss or gradient, divergence).
struct TrainError : Error {
    explicit TrainError(const std::string& msg) : Error(msg) {}
};

// Model fitting failure outside the gradient path (rank deficiency, ...).
struct FitError : Error {
    explicit FitError(const std::string& msg) : Error(msg) {}
};

// Forward-simulation failure, carries (observation, draw, regime) context.
struct SimError : Error {
    explicit SimError(const std::string& msg) : Error(msg) {}
};

// Malformed input data (CSV parse errors, missing values).
struct DataError : Error {
    explicit DataError(const std::string& msg) : Error(msg) {}
};

} // namespace dcma

#endif
