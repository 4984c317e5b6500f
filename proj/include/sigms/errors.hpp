#pragma once

#include <stdexcept>
#include <string>

namespace sigms {

/// Invalid user-supplied configuration (grid sizes, boundary labels, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Outcome of a linear or nonlinear solve, attached to solver failures
/// and available to callers for diagnostics.
struct SolveReport {
    int iterations = 0;
    double residual = 0.0;   // relative 2-norm
    std::string method;
};

/// Linear solver did not reach the requested tolerance.
class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& what, SolveReport rep)
        : std::runtime_error(what), report(std::move(rep)) {}
    SolveReport report;
};

/// Active set iteration hit the iteration cap without reaching a fixpoint.
class NonTerminationError : public std::runtime_error {
public:
    NonTerminationError(const std::string& what, int iterations)
        : std::runtime_error(what), iterations(iterations) {}
    int iterations;
};

} // namespace sigms
