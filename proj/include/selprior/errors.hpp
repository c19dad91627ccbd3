#pragma once

#include <stdexcept>
#include <string>

namespace selprior {

// Base class for every recoverable failure raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// A numeric routine failed to converge or lost too much precision.
class NumericError : public Error {
public:
    using Error::Error;
};

// Observed data is incompatible with the selection event.
class InvalidObservationError : public Error {
public:
    using Error::Error;
};

// Posterior mass keeps growing as the tabulation domain expands.
class DivergedPosteriorError : public Error {
public:
    using Error::Error;
};

// Rejection sampling exhausted its attempt budget.
class LowAcceptanceError : public Error {
public:
    LowAcceptanceError(const std::string& what, double rate)
        : Error(what), acceptance_rate(rate) {}
    double acceptance_rate;
};

// Metropolis-Hastings never accepted a proposal during burn-in.
class StuckChainError : public Error {
public:
    using Error::Error;
};

// Experiment configuration is malformed or inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace selprior
