#pragma once

#include <stdexcept>
#include <string>

namespace fermicycle {

// User-facing configuration problem: malformed file, unresolved reference,
// invalid cycle geometry, unsupported sweep path. Messages carry the field
// or junction that failed.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

// A solver exhausted its budget before reaching tolerance. Carries the last
// residual and the iteration/step count for diagnostics.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& message, double residual, long iterations)
        : std::runtime_error(message), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    long iterations() const noexcept { return iterations_; }

private:
    double residual_;
    long iterations_;
};

}  // namespace fermicycle
