#include "gibbstree/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gibbstree/errors.hpp"

namespace gibbstree {

QuadRule quad_rule_from_string(const std::string& name) {
    if (name == "gauss-split") return QuadRule::GaussSplit;
    if (name == "composite-simpson") return QuadRule::CompositeSimpson;
    if (name == "trapezoid") return QuadRule::Trapezoid;
    throw config_error("unknown quadrature rule: " + name);
}

std::string to_string(QuadRule rule) {
    switch (rule) {
        case QuadRule::GaussSplit: return "gauss-split";
        case QuadRule::CompositeSimpson: return "composite-simpson";
        case QuadRule::Trapezoid: return "trapezoid";
    }
    return "?";
}

double Grid::integrate(std::span<const double> values) const {
    if (values.size() != nodes.size())
        throw contract_error("integrate: value count does not match the grid");
    double acc = 0.0;
    for (size_t i = 0; i < values.size(); ++i) acc += weights[i] * values[i];
    return acc;
}

bool Grid::same_nodes_as(const Grid& other) const {
    return nodes == other.nodes && weights == other.weights;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // Recompute P_{n-1} at the converged point for the weight.
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
            double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Symmetric pairing keeps odd integrands cancelling to rounding.
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

GridPtr make_grid(int n_nodes, QuadRule rule) {
    auto g = std::make_shared<Grid>();
    g->rule = rule;
    switch (rule) {
        case QuadRule::Trapezoid: {
            if (n_nodes < 2) throw config_error("trapezoid rule needs at least 2 nodes");
            const double h = 1.0 / (n_nodes - 1);
            g->nodes.resize(n_nodes);
            g->weights.assign(n_nodes, h);
            for (int i = 0; i < n_nodes; ++i) g->nodes[i] = i * h;
            g->weights.front() = h / 2;
            g->weights.back() = h / 2;
            break;
        }
        case QuadRule::CompositeSimpson: {
            if (n_nodes < 5) throw config_error("composite-simpson rule needs at least 5 nodes");
            if (n_nodes % 2 == 0)
                throw config_error("composite-simpson rule needs an odd node count");
            const double h = 1.0 / (n_nodes - 1);
            g->nodes.resize(n_nodes);
            g->weights.resize(n_nodes);
            for (int i = 0; i < n_nodes; ++i) {
                g->nodes[i] = i * h;
                g->weights[i] = (i == 0 || i == n_nodes - 1) ? h / 3
                               : (i % 2 == 1)                ? 4 * h / 3
                                                             : 2 * h / 3;
            }
            break;
        }
        case QuadRule::GaussSplit: {
            if (n_nodes < 4) throw config_error("gauss-split rule needs at least 4 nodes");
            const int n_left = n_nodes / 2 + n_nodes % 2;
            const int n_right = n_nodes / 2;
            std::vector<double> x, w;
            gauss_legendre(n_left, x, w);
            for (int i = 0; i < n_left; ++i) {
                g->nodes.push_back(0.25 * (x[i] + 1.0));
                g->weights.push_back(0.25 * w[i]);
            }
            if (n_right != n_left) gauss_legendre(n_right, x, w);
            for (int i = 0; i < n_right; ++i) {
                g->nodes.push_back(0.75 + 0.25 * x[i]);
                g->weights.push_back(0.25 * w[i]);
            }
            break;
        }
    }
    return g;
}

}  // namespace gibbstree
