#pragma once

#include <stdexcept>
#include <string>

namespace tcsde {

// Parameter outside its admissible domain (index not in (0,1), non-positive step, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A requested real time is not covered by the simulated operational horizon.
class HorizonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature that failed to converge, or a state that left the finite range.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericError {
public:
    QuadratureError(const std::string& what, double achieved)
        : NumericError(what), achieved_(achieved) {}
    double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

class BlowUpError : public NumericError {
public:
    BlowUpError(const std::string& what, double t, double x)
        : NumericError(what), t_(t), x_(x) {}
    double time() const noexcept { return t_; }
    double state() const noexcept { return x_; }

private:
    double t_;
    double x_;
};

// Guarded contract of an operation was not met by the caller.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A standing assumption on the coefficients or the jump measure is violated.
class AssumptionViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Not enough usable data to produce an estimate.
class DiagnosticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration or command line.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace tcsde
