#pragma once

#include <stdexcept>
#include <string>

namespace heatforms {

/// Argument-class failures (bad degrees, dimensions, off-manifold inputs,
/// malformed configuration). The CLI maps these to exit code 2.
struct DimensionMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegreeMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct OffManifoldError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Requested operation exists in the interface but is not available for the
/// given model/scheme combination. Treated as a configuration error.
struct NotImplementedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical-class failures (singular operators, integration blow-ups).
/// The CLI maps these to exit code 3.
struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepTooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace heatforms
