#pragma once

#include <stdexcept>
#include <string>

namespace stable_stein {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller misuse that is not a numeric domain issue (bad enum value, bad grid).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An iterative or quadrature routine failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double partial_estimate, double achieved_error)
        : std::runtime_error(what), partial_(partial_estimate), error_(achieved_error) {}

    double partial_estimate() const noexcept { return partial_; }
    double achieved_error() const noexcept { return error_; }

private:
    double partial_;
    double error_;
};

}  // namespace stable_stein
