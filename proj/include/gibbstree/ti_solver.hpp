#pragma once

#include <span>
#include <vector>

#include "gibbstree/field.hpp"
#include "gibbstree/kernel.hpp"

namespace gibbstree {

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 2000;
    double damping = 1.0;  // h <- (1-d) h + d kA(h); halved automatically on residual growth
};

struct TiSolution {
    Field h;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Period-2 diagnostic: iterates alternate between two fields. Meaningful
    /// behavior (periodic boundary laws), reported rather than treated as failure.
    bool limit_cycle = false;
    double limit_cycle_gap = 0.0;
};

/// Damped Picard iteration for the translation-invariant equation h = kA(h).
/// Returns the best iterate seen; non-convergence is data, not failure.
/// Throws divergence_error when the residual grows past 10 * sup h_max.
TiSolution solve_ti(const Kernel& kern, int k, const Field& h0, const SolveOptions& opts = {});

/// Pointwise scalings of the band's upper bound, plus the odd tilts
/// (t - 1/2) h_max that break the reflection symmetry of the presets (without
/// them Picard cannot leave the symmetric class and only finds the free field).
std::vector<Field> standard_inits(const Kernel& kern, int k);

/// Run solve_ti from every init, keep converged results, deduplicate by
/// sup-distance < distinct_eps, sort by sup-norm.
std::vector<TiSolution> find_ti_multi(const Kernel& kern, int k, std::span<const Field> inits,
                                      double tol = 1e-10, double distinct_eps = 1e-3);

}  // namespace gibbstree
