#pragma once

#include <stdexcept>
#include <string>

namespace vic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
    using Error::Error;
};

class SpaceMismatch : public Error {
public:
    using Error::Error;
};

class InvalidState : public Error {
public:
    using Error::Error;
};

class UnknownLevel : public Error {
public:
    using Error::Error;
};

class UnsupportedConfiguration : public Error {
public:
    using Error::Error;
};

/// Adaptive step size collapsed below the representable resolution.
class StiffnessError : public Error {
public:
    StiffnessError(const std::string& what, double time_reached)
        : Error(what), time_reached_(time_reached) {}
    double time_reached() const noexcept { return time_reached_; }

private:
    double time_reached_;
};

class DegenerateSteadyState : public Error {
public:
    DegenerateSteadyState(const std::string& what, int kernel_dimension)
        : Error(what), kernel_dimension_(kernel_dimension) {}
    int kernel_dimension() const noexcept { return kernel_dimension_; }

private:
    int kernel_dimension_;
};

/// The correlation record is too short for the half-line spectrum integral.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double required_tau_max)
        : Error(what), required_tau_max_(required_tau_max) {}
    double required_tau_max() const noexcept { return required_tau_max_; }

private:
    double required_tau_max_;
};

/// Malformed scenario configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace vic
