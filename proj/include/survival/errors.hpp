// errors.hpp: exception types shared by the survival library.

#pragma once

#include <stdexcept>
#include <string>

namespace survival {

/// Invalid model or operation parameter (non-positive hopping, too short chain, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a function (energy outside the band, negative time).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Numerical procedure failed to reach its target (eigensolver, quadrature).
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double achieved = 0.0)
        : std::runtime_error(what), achieved_(achieved) {}

    /// Accuracy actually reached, when meaningful.
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

} // namespace survival
