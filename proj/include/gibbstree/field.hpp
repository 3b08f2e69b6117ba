#pragma once

#include <span>
#include <vector>

#include "gibbstree/grid.hpp"

namespace gibbstree {

/// A real function of the spin variable, sampled at the grid nodes, with the
/// normalization point t = 0 carried explicitly (it is not a quadrature node).
///
/// Fields produced by the transfer operator have value_at_zero == 0 exactly.
struct Field {
    GridPtr grid;
    std::vector<double> values;
    double value_at_zero = 0.0;

    Field() = default;
    explicit Field(GridPtr g) : grid(std::move(g)), values(grid->nodes.size(), 0.0) {}
    Field(GridPtr g, std::vector<double> v, double at_zero = 0.0)
        : grid(std::move(g)), values(std::move(v)), value_at_zero(at_zero) {}

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[i]; }
    double& operator[](int i) { return values[i]; }

    /// Monotone-cubic evaluation off the grid; t = 0 uses the stored pin as a knot.
    double eval_at(double t) const;

    bool all_finite() const;
};

Field zero_field(const GridPtr& g);

double sup_norm(const Field& f);
double sup_dist(const Field& a, const Field& b);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double c, const Field& a);

/// a + c pointwise (value_at_zero shifts too).
Field shifted(const Field& a, double c);

/// Extrapolated value at t = 0 from the node samples alone (the stored pin is
/// ignored); used to fix the additive representative of solver outputs.
double extrapolate_to_zero(const Field& f);

void require_same_grid(const Field& a, const Field& b, const char* where);

}  // namespace gibbstree
