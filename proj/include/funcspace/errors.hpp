#pragma once

#include <stdexcept>
#include <string>

namespace funcspace {

/// Bad inputs to library operations (dimension mismatch, invalid p, ...).
struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An ODE flow produced a non-finite or unbounded state.
struct divergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A target function lacks the data a bound computation requires.
struct unsupported_target : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Problems with study/CLI configuration files.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem / serialization failures.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace funcspace
