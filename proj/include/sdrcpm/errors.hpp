#pragma once

#include <stdexcept>
#include <string>

namespace sdrcpm {

// Scheme parameters cannot be realized (bad range, non-PSD correlations, no power split).
class ParameterInfeasible : public std::invalid_argument {
public:
    explicit ParameterInfeasible(const std::string& what) : std::invalid_argument(what) {}
};

// A covariance block is too degenerate for a finite information value.
class NumericalConditioning : public std::runtime_error {
public:
    explicit NumericalConditioning(const std::string& what) : std::runtime_error(what) {}
};

// The compression constraint has no solution for the given parameters.
class ConstraintInfeasible : public std::runtime_error {
public:
    explicit ConstraintInfeasible(const std::string& what) : std::runtime_error(what) {}
};

// Conditional probability table with negative entries or rows not summing to one.
class MalformedKernel : public std::invalid_argument {
public:
    explicit MalformedKernel(const std::string& what) : std::invalid_argument(what) {}
};

class CapacityExceeded : public std::length_error {
public:
    explicit CapacityExceeded(const std::string& what) : std::length_error(what) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sdrcpm
