#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gibbstree {

enum class QuadRule { GaussSplit, CompositeSimpson, Trapezoid };

QuadRule quad_rule_from_string(const std::string& name);
std::string to_string(QuadRule rule);

/// Quadrature on [0,1] with total weight 1 (the a-priori measure of the spin space).
///
/// Every function of the spin variable is represented by its values at `nodes`;
/// t = 0 is not generally a node and is always evaluated directly by callers.
struct Grid {
    std::vector<double> nodes;    // strictly increasing, inside [0,1]
    std::vector<double> weights;  // positive, sum to 1
    QuadRule rule = QuadRule::GaussSplit;

    int n_nodes() const { return static_cast<int>(nodes.size()); }

    /// Weighted sum over the nodes. `values` must match the node count.
    double integrate(std::span<const double> values) const;

    bool same_nodes_as(const Grid& other) const;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Build a grid.
///
/// GaussSplit places a Gauss–Legendre rule separately on [0,1/2] and [1/2,1]
/// (the preset kernels have a root singularity in the derivative at u = 1/2;
/// splitting restores spectral convergence). CompositeSimpson needs an odd
/// node count. Trapezoid accepts n >= 2, the other rules n >= 4.
GridPtr make_grid(int n_nodes, QuadRule rule);

/// Gauss–Legendre nodes/weights on [-1,1], exactly symmetric about 0.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace gibbstree
