#pragma once

#include <stdexcept>
#include <string>

namespace gibbstree {

/// Bad user-facing configuration (unknown preset, malformed expression, bad grid size).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A caller violated an API precondition (length mismatch, wrong grid, spin out of range).
struct contract_error : std::logic_error {
    explicit contract_error(const std::string& msg) : std::logic_error(msg) {}
};

/// Kernel is unusable: non-finite or non-positive on the grid.
struct kernel_error : std::runtime_error {
    explicit kernel_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Generic numeric failure (overflow despite scaling, non-finite intermediate).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative solver ran out of iterations; carries the best residual seen.
struct no_convergence_error : numeric_error {
    double best_residual;
    no_convergence_error(const std::string& msg, double residual)
        : numeric_error(msg), best_residual(residual) {}
};

/// Iterates left the admissible region and kept growing.
struct divergence_error : numeric_error {
    explicit divergence_error(const std::string& msg) : numeric_error(msg) {}
};

/// An enumeration or allocation would exceed the configured caps.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gibbstree
