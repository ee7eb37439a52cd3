#pragma once

#include <stdexcept>
#include <string>

namespace fkpp {

/// Invalid configuration or precondition violation (CLI exit code 1).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Shape/grid mismatch between operands.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Numerical failure at runtime (CLI exit code 2).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iterative solver did not converge.
class IterationError : public NumericError {
public:
    IterationError(const std::string& msg, double last_residual)
        : NumericError(msg), residual(last_residual) {}
    double residual;
};

/// Discrete structure violated (e.g. eigenfunction positivity lost).
class StructuralError : public NumericError {
public:
    explicit StructuralError(const std::string& msg) : NumericError(msg) {}
};

} // namespace fkpp
