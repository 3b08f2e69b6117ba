#include "gibbstree/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "gibbstree/errors.hpp"

namespace gibbstree {

namespace {

double odd_root(double x, double inv_n) {
    return (x < 0 ? -1.0 : 1.0) * std::pow(std::abs(x), inv_n);
}

void build_caches(Kernel& k) {
    const auto& nodes = k.grid->nodes;
    const int n = k.n();
    k.node_matrix.resize(n, n);
    k.row0.resize(n);
    k.col0.resize(n);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double v = k.eval(nodes[i], nodes[j]);
            if (!std::isfinite(v))
                throw kernel_error("kernel is not finite at a grid pair");
            if (v <= 0.0) throw kernel_error("kernel is not positive at a grid pair");
            k.node_matrix(i, j) = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        double c = k.eval(nodes[i], 0.0);
        if (!std::isfinite(c) || c <= 0.0)
            throw kernel_error("kernel is not positive/finite at (t_i, 0)");
        k.col0(i) = c;
    }
    for (int j = 0; j < n; ++j) {
        double v = k.eval(0.0, nodes[j]);
        if (!std::isfinite(v) || v <= 0.0)
            throw kernel_error("kernel is not positive/finite at (0, u_j)");
        k.row0(j) = v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    k.min_on_grid = lo;
    k.max_on_grid = hi;
    k.lu_ = std::make_shared<Eigen::FullPivLU<Eigen::MatrixXd>>(k.node_matrix);
    k.invertible_ = k.lu_->rank() == n;
}

}  // namespace

Eigen::VectorXd Kernel::solve_node_matrix(const Eigen::VectorXd& b) const {
    if (!invertible_) throw numeric_error("kernel node matrix is singular");
    return lu_->solve(b);
}

Kernel kernel_from_xi(std::function<double(double, double)> xi, double J, double beta,
                      const GridPtr& grid) {
    if (J == 0.0) throw config_error("coupling J must be nonzero");
    if (beta <= 0.0) throw config_error("inverse temperature beta must be positive");
    Kernel k;
    k.J = J;
    k.beta = beta;
    k.grid = grid;
    k.eval = [xi = std::move(xi), J, beta](double t, double u) {
        return std::exp(J * beta * xi(t, u));
    };
    build_caches(k);
    return k;
}

Kernel preset_kernel(const std::string& name, const GridPtr& grid) {
    Kernel k;
    k.grid = grid;
    k.preset_id = name;
    if (name == "ehr12-k2") {
        k.eval = [](double t, double u) {
            return 1.0 + (14.0 / 15.0) * odd_root(4.0 * (t - 0.5) * (u - 0.5), 0.2);
        };
    } else if (name == "ehr12-k3") {
        k.eval = [](double t, double u) {
            return 1.0 + 0.5 * odd_root(4.0 * (t - 0.5) * (u - 0.5), 1.0 / 7.0);
        };
    } else if (name == "constant") {
        k.eval = [](double, double) { return 1.0; };
    } else {
        throw config_error("unknown kernel preset: " + name);
    }
    build_caches(k);
    return k;
}

ZeroMeanReport check_zero_mean(const Kernel& kern, double tol) {
    const auto& g = *kern.grid;
    Eigen::Map<const Eigen::VectorXd> w(g.weights.data(), g.n_nodes());
    const double base = kern.row0.dot(w);
    // t = 0 deviates from itself by 0, so only grid rows contribute.
    const Eigen::VectorXd row_integrals = kern.node_matrix * w;
    const double max_dev = (row_integrals.array() - base).abs().maxCoeff();
    return {max_dev < tol, max_dev, tol};
}

FieldBand h_bounds(const Kernel& kern, int k) {
    if (k < 1) throw contract_error("h_bounds: k must be >= 1");
    const auto& nodes = kern.grid->nodes;
    const int n = kern.n();
    const double extra_u[3] = {0.0, 0.5, 1.0};

    auto row_extrema = [&](double t, int grid_row) {
        double lo, hi;
        if (grid_row >= 0) {
            lo = kern.node_matrix.row(grid_row).minCoeff();
            hi = kern.node_matrix.row(grid_row).maxCoeff();
        } else {
            lo = kern.row0.minCoeff();
            hi = kern.row0.maxCoeff();
        }
        for (double u : extra_u) {
            double v = kern.eval(t, u);
            if (!std::isfinite(v) || v <= 0.0)
                throw kernel_error("kernel is not positive/finite at an augmentation point");
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return std::pair{lo, hi};
    };

    auto [lo0, hi0] = row_extrema(0.0, -1);
    if (lo0 <= 0.0) throw kernel_error("h_bounds: kernel minimum is not positive");

    FieldBand band{Field(kern.grid), Field(kern.grid)};
    for (int i = 0; i < n; ++i) {
        auto [lo, hi] = row_extrema(nodes[i], i);
        band.lo.values[i] = k * std::log(lo / hi0);
        band.hi.values[i] = k * std::log(hi / lo0);
    }
    band.lo.value_at_zero = k * std::log(lo0 / hi0);
    band.hi.value_at_zero = k * std::log(hi0 / lo0);
    return band;
}

double band_amplitude(const FieldBand& band) {
    return std::max(sup_norm(band.lo), sup_norm(band.hi));
}

}  // namespace gibbstree
