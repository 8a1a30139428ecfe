#pragma once

#include <stdexcept>
#include <string>

namespace winter {

// Base for every error this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of the operation.
struct DomainError : Error {
    using Error::Error;
};

// Evaluation requested at (or numerically indistinguishable from) a pole.
struct PoleError : Error {
    using Error::Error;
};

// Quantity diverges at the requested point (e.g. a complete integral at modulus 1).
struct DivergenceError : Error {
    using Error::Error;
};

// A quadrature or iteration finished without certifying the requested accuracy.
// `achieved` is the best error estimate that was reached.
struct AccuracyError : Error {
    double achieved;
    AccuracyError(const std::string& what, double achieved_) : Error(what), achieved(achieved_) {}
};

// A reconstructed profile is not a valid normalizable state (e.g. pole in the tail).
struct InvalidProfileError : Error {
    using Error::Error;
};

// NaN/Inf or other numerical breakdown inside an algorithm.
struct NumericalError : Error {
    using Error::Error;
};

// Not enough input data to compute the requested quantity.
struct InsufficientDataError : Error {
    using Error::Error;
};

// Invalid run configuration (CLI/config-file level).
struct ConfigError : Error {
    using Error::Error;
};

// Internal consistency check failed; indicates a bug, not a user error.
struct InternalError : Error {
    using Error::Error;
};

}  // namespace winter
