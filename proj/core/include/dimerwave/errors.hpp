#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dimerwave {

/// Bad user input: config files, CLI parameters, grid/truncation mismatches.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Mathematically invalid request (subsonic speed, amplitude above cap,
/// non-orthogonal right-hand side, material/symmetry mismatch).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A certified internal identity failed; indicates a bug, not bad input.
struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

/// Fixed-point or Newton iteration failed to converge.  Carries the
/// per-iteration increment history for diagnosis.
struct NonConvergenceError : std::runtime_error {
    std::vector<double> increments;
    NonConvergenceError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), increments(std::move(history)) {}
};

}  // namespace dimerwave
