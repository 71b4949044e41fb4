#pragma once

#include <stdexcept>
#include <string>

namespace sasemt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Series operands disagree on order or start time.
class OrderMismatchError : public Error {
public:
    using Error::Error;
};

/// sqrt(g^2 + h^2) recursion hit a vanishing leading coefficient.
class DegenerateMagnitudeError : public Error {
public:
    using Error::Error;
};

/// Invalid physical or solver parameters.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Network stamping failed (floating node, unknown element, islanding).
class AssemblyError : public Error {
public:
    using Error::Error;
};

/// Steady-state construction failed (singular phasor system, limits violated).
class InitializationError : public Error {
public:
    using Error::Error;
};

/// A coefficient or state became NaN/Inf.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::string state, int order)
        : Error(what), state_(std::move(state)), order_(order) {}

    [[nodiscard]] const std::string& state() const noexcept { return state_; }
    [[nodiscard]] int order() const noexcept { return order_; }

private:
    std::string state_;
    int order_ = -1;
};

/// Step size hit the configured minimum while the imbalance was still too large.
class StiffnessError : public Error {
public:
    using Error::Error;
};

/// Case file could not be parsed or failed validation.
class CaseError : public Error {
public:
    using Error::Error;
};

}  // namespace sasemt
