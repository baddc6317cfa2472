#pragma once

#include <stdexcept>
#include <string>

namespace macrofield {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: malformed text, missing columns, broken invariants, bad parameters.
class ValidationError : public Error {
public:
    using Error::Error;
};

class SchemaError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class GapError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ParameterError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Numerical breakdown: poles, degenerate designs, divergence.
class NumericError : public Error {
public:
    using Error::Error;
};

class PoleError : public NumericError {
public:
    using NumericError::NumericError;
};

class DegenerateError : public NumericError {
public:
    using NumericError::NumericError;
};

class ImaginaryTimeError : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularityError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Iterative fit failed to converge.
class FitError : public Error {
public:
    FitError(const std::string& what, int iterations, double last_step)
        : Error(what), iterations_(iterations), last_step_(last_step) {}

    [[nodiscard]] int iterations() const noexcept { return iterations_; }
    [[nodiscard]] double last_step() const noexcept { return last_step_; }

private:
    int iterations_;
    double last_step_;
};

} // namespace macrofield
