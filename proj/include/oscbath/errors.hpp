// errors.hpp: exception types shared by all oscbath modules.

#pragma once

#include <stdexcept>
#include <string>

namespace oscbath {

// Argument outside the mathematical domain of an operation (negative frequency,
// non-positive temperature, Im z <= 0 for a continuation, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// F(z) has (or is numerically indistinguishable from having) a pole.
class PoleError : public std::runtime_error {
public:
    PoleError(const std::string& what, double location)
        : std::runtime_error(what), location_(location) {}
    double location() const noexcept { return location_; }

private:
    double location_;
};

// A quadrature or identity check did not reach the requested tolerance.
class ToleranceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bath or oscillator state violating the Heisenberg bound or malformed tables.
class InvalidPreparation : public std::invalid_argument {
public:
    InvalidPreparation(const std::string& what, double omega)
        : std::invalid_argument(what), omega_(omega) {}
    double omega() const noexcept { return omega_; }

private:
    double omega_;
};

// Logarithm in the cumulant generating function left the principal sheet.
class BranchError : public std::runtime_error {
public:
    BranchError(const std::string& what, double omega, double xi_re, double xi_im)
        : std::runtime_error(what), omega_(omega), xi_re_(xi_re), xi_im_(xi_im) {}
    double omega() const noexcept { return omega_; }
    double xi_re() const noexcept { return xi_re_; }
    double xi_im() const noexcept { return xi_im_; }

private:
    double omega_, xi_re_, xi_im_;
};

// Operation not defined for the given kind of input (e.g. linear response for
// a nonthermal preparation).
class Unsupported : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace oscbath
