#pragma once

#include <stdexcept>
#include <string>

namespace vbwave {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid construction arguments (space parameters, profile parameters, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A banded factorization met a zero or negative pivot.
class PivotError : public Error {
public:
    PivotError(const std::string& what, long row, double pivot)
        : Error(what), row_(row), pivot_(pivot) {}
    [[nodiscard]] long row() const noexcept { return row_; }
    [[nodiscard]] double pivot() const noexcept { return pivot_; }

private:
    long row_;
    double pivot_;
};

/// The CBs mass form is not coercive for the requested bathymetry.
class CoercivityError : public Error {
public:
    using Error::Error;
};

/// Total water depth eta_b + eps*zeta became non-positive.
class DepthError : public Error {
public:
    DepthError(const std::string& what, double x, double depth)
        : Error(what), x_(x), depth_(depth) {}
    [[nodiscard]] double x() const noexcept { return x_; }
    [[nodiscard]] double depth() const noexcept { return depth_; }

private:
    double x_;
    double depth_;
};

/// Newton iteration for the solitary-wave profile failed.
class NewtonError : public Error {
public:
    using Error::Error;
};

/// Configuration or CLI input is malformed.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A time integration was aborted; carries the failing step.
class RunAborted : public Error {
public:
    RunAborted(const std::string& what, long step, double time)
        : Error(what), step_(step), time_(time) {}
    [[nodiscard]] long step() const noexcept { return step_; }
    [[nodiscard]] double time() const noexcept { return time_; }

private:
    long step_;
    double time_;
};

}  // namespace vbwave
