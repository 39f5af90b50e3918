#pragma once

#include <stdexcept>
#include <string>

namespace srled {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-physical input; `field()` names the offending parameter.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// The spectrum denominator is not positive for some real frequency, i.e. the
/// state sits at or beyond the (effective) lasing threshold.
class StabilityViolation : public Error {
public:
    StabilityViolation(const std::string& what, double upper_population)
        : Error(what), upper_population_(upper_population) {}
    double upper_population() const noexcept { return upper_population_; }

private:
    double upper_population_;
};

class QuadratureNoConvergence : public Error {
public:
    using Error::Error;
};

class NoRoot : public Error {
public:
    using Error::Error;
};

class FixedPointDivergence : public Error {
public:
    using Error::Error;
};

class WindowTooNarrow : public Error {
public:
    using Error::Error;
};

/// Poles of a rational integrand nearly coincide; the residue sum would lose
/// too many digits to cancellation.
class DegenerateRoots : public Error {
public:
    using Error::Error;
};

/// An invariant that must hold by construction was observed to fail.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace srled
