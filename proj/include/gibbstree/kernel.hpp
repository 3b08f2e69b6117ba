#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>

#include "gibbstree/field.hpp"
#include "gibbstree/grid.hpp"

namespace gibbstree {

/// The pair-interaction weight K(t,u) = exp(J*beta*xi(t,u)) with its node
/// caches. Positive and bounded on the grid; immutable after construction.
struct Kernel {
    std::function<double(double, double)> eval;
    double J = 1.0;
    double beta = 1.0;
    std::string preset_id;  // empty for expression-built kernels
    GridPtr grid;

    Eigen::MatrixXd node_matrix;  // K(t_i, u_j)
    Eigen::VectorXd row0;         // K(0, u_j)
    Eigen::VectorXd col0;         // K(t_i, 0)
    double min_on_grid = 0.0;     // over node pairs and (0, u_j)
    double max_on_grid = 0.0;

    int n() const { return grid->n_nodes(); }

    /// Whether the node matrix is numerically invertible (full rank). The
    /// example kernels are finite-rank and are not; generic kernels are.
    bool node_matrix_invertible() const { return invertible_; }

    /// Solve node_matrix * x = b (only valid when node_matrix_invertible()).
    Eigen::VectorXd solve_node_matrix(const Eigen::VectorXd& b) const;

    // built by the factory functions below
    std::shared_ptr<Eigen::FullPivLU<Eigen::MatrixXd>> lu_;
    bool invertible_ = false;
};

/// Build a kernel from a Hamiltonian weight function xi: K = exp(J*beta*xi).
Kernel kernel_from_xi(std::function<double(double, double)> xi, double J, double beta,
                      const GridPtr& grid);

/// Named example kernels: "ehr12-k2", "ehr12-k3", "constant".
Kernel preset_kernel(const std::string& name, const GridPtr& grid);

struct ZeroMeanReport {
    bool holds = false;
    double max_dev = 0.0;
    double tol = 0.0;
};

/// Checks the free-field condition: the row integral of K is independent of t,
/// i.e. max_t |int (K(t,u) - K(0,u)) du| < tol. When it holds, the constant
/// field is a solution for every branching order. Default tol is the measured
/// quadrature floor for the presets at 64 split-Gauss nodes.
ZeroMeanReport check_zero_mean(const Kernel& kern, double tol = 1e-8);

struct FieldBand {
    Field lo;  // h_min
    Field hi;  // h_max
};

/// Attainable band for boundary fields of branching order k:
///   h_min(t) = k ln(min_u K(t,u) / max_u K(0,u)),
///   h_max(t) = k ln(max_u K(t,u) / min_u K(0,u)),
/// extrema over the grid plus u in {0, 1/2, 1} evaluated directly.
FieldBand h_bounds(const Kernel& kern, int k);

/// sup_t of the wider band side, used as a default amplitude scale.
double band_amplitude(const FieldBand& band);

}  // namespace gibbstree
