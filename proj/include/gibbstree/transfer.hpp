#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "gibbstree/field.hpp"
#include "gibbstree/kernel.hpp"

namespace gibbstree {

/// The nonlinear transfer operator on boundary fields,
///   (A h)(t) = ln [ int K(t,u) e^{h(u)} du / int K(0,u) e^{h(u)} du ],
/// evaluated at the grid nodes and pinned to (A h)(0) = 0 exactly.
/// e^h is computed with max-subtraction; the shift cancels in the ratio.
Field apply_transfer(const Kernel& kern, const Field& h);

/// k * (A h), the per-vertex update for branching order k.
Field apply_transfer_k(const Kernel& kern, int k, const Field& h);

/// Analytic derivative of A at h:
///   J(i,j) = w_j e^{h_j} [K(t_i,u_j)/N(t_i) - K(0,u_j)/N(0)],  N(t) = int K(t,u)e^h du.
/// Constant fields span the null space (A is shift-invariant).
Eigen::MatrixXd transfer_jacobian(const Kernel& kern, const Field& h);

struct InverseResult {
    Field preimage;
    /// kA(preimage) equals (target - target_shift). The shift is the target's
    /// range defect, a pure constant; it vanishes for targets in the range
    /// of kA and is absorbed legally by re-representing the target (kA is
    /// invariant under constant shifts of its argument).
    double target_shift = 0.0;
    double residual = 0.0;  // sup |kA(preimage) - (target - target_shift)|
    int iterations = 0;
    bool via_linear = false;
};

/// Solve kA(h) = target.
///
/// When the kernel node matrix is invertible this is one linear solve:
/// K mu = e^{target/k} with mu = w e^h, scaled so that int K(0,u) e^{h(u)} du = 1
/// (the representative whose kernel extension vanishes at t = 0). Otherwise a
/// damped Newton iteration on the pinned subspace {h : h(0) = 0} is used, with
/// SVD-regularized steps, backtracking line search and initial guess target/k.
InverseResult invert_transfer_k_detailed(const Kernel& kern, int k, const Field& target,
                                         double tol = 1e-9, int max_iter = 120);

/// Convenience wrapper: requires kA(h) = target itself within tol, so the
/// target's range defect counts toward the residual. Throws
/// no_convergence_error (carrying the best residual) when unattainable.
Field invert_transfer_k(const Kernel& kern, int k, const Field& target, double tol = 1e-9,
                        int max_iter = 120);

/// How random probe pairs are drawn by estimate_contraction.
/// Rough: node values i.i.d. uniform in [-amplitude, amplitude].
/// Mixed: rough pairs, independent smooth pairs, and nearby smooth pairs
///        (all with values in [-amplitude, amplitude]); a sharper Lipschitz
///        probe, since the operator damps rough directions strongly.
enum class PairFamily { Rough, Mixed };

struct ContractionEstimate {
    double alpha_sup = 0.0;        // max over pairs of sup|Af-Ag| / sup|f-g|
    double alpha_pointwise = 0.0;  // max pointwise ratio where |f-g| > 1e-6
    int n_samples = 0;
    double amplitude = 0.0;
    std::uint64_t seed = 0;
    PairFamily family = PairFamily::Rough;
};

/// Randomized estimate of the operator's Lipschitz constant (empirical, not
/// certified). Deterministic for a given seed. The pointwise ratio is reported
/// because the literature states the contraction condition pointwise; for
/// integral operators it is far larger than the sup-norm constant.
ContractionEstimate estimate_contraction(const Kernel& kern, int n_samples, double amplitude,
                                         std::uint64_t seed,
                                         PairFamily family = PairFamily::Rough);

/// Canonical additive representative of a field regarded as a member of the
/// pinned subspace {h : h(0) = 0}: subtract the range defect when the kernel
/// matrix is invertible, otherwise the monotone-cubic extrapolation to t = 0.
Field range_pinned(const Kernel& kern, int k, const Field& h);

}  // namespace gibbstree
