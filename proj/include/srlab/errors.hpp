#pragma once

#include <stdexcept>
#include <string>

namespace srlab {

// Base of every error raised by the library. The CLI maps the derived kinds
// onto process exit codes, see exit_code().
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// A time or bound that is not an integer multiple of the grid step.
class GridAlignmentError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class BadExtensionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class GridMismatchError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class InsufficientHistoryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NumericalBlowupError : public NumericalError {
public:
    NumericalBlowupError(const std::string& what, double time, double state)
        : NumericalError(what), time_(time), state_(state) {}
    double time() const noexcept { return time_; }
    double state() const noexcept { return state_; }

private:
    double time_;
    double state_;
};

class QualityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateMeasureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_distance)
        : Error(what), last_distance_(last_distance) {}
    double last_distance() const noexcept { return last_distance_; }

private:
    double last_distance_;
};

}  // namespace srlab
