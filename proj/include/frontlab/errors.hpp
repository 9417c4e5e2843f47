#pragma once

#include <stdexcept>
#include <string>

namespace frontlab {

// Base class for all frontlab failures so callers can catch one type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the contract of an operation (u outside [0,1], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// c below the linear spreading speed, or c^2 + 4 nu < 0.
class SubcriticalError : public Error {
public:
    using Error::Error;
};

// nu_0 >= 0: the zero state is not linearly unstable.
class HypothesisError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double last_value)
        : Error(msg), last_value(last_value) {}
    double last_value = 0.0;
};

// Bisection bracket endpoints classify identically.
class BadBracketError : public Error {
public:
    using Error::Error;
};

// Descent made no progress over many accepted steps.
class StallError : public Error {
public:
    using Error::Error;
};

// Profile hit the left boundary without flattening.
class DomainTooShortError : public Error {
public:
    using Error::Error;
};

// Tail window empty or profile nonpositive where a decay fit was requested.
class TailUnresolvedError : public Error {
public:
    using Error::Error;
};

// Monotone iteration left the sub/supersolution sandwich.
class IterationOrderError : public Error {
public:
    using Error::Error;
};

// Two distinct fronts found in a regime where uniqueness is certified.
class CertificationFailureError : public Error {
public:
    using Error::Error;
};

// Adaptive ODE step shrank below the representable floor.
class StiffnessError : public Error {
public:
    using Error::Error;
};

// Config file problem; carries a line number when known.
class ConfigError : public Error {
public:
    ConfigError(const std::string& msg, int line = -1)
        : Error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line(line) {}
    int line = -1;
};

} // namespace frontlab
