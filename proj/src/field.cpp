#include "gibbstree/field.hpp"

#include <algorithm>
#include <cmath>

#include "gibbstree/errors.hpp"
#include "gibbstree/interp.hpp"

namespace gibbstree {

double Field::eval_at(double t) const {
    const auto& nodes = grid->nodes;
    if (t == 0.0) return value_at_zero;
    std::vector<double> x, y;
    x.reserve(nodes.size() + 1);
    y.reserve(nodes.size() + 1);
    if (nodes.front() > 0.0) {
        x.push_back(0.0);
        y.push_back(value_at_zero);
    }
    x.insert(x.end(), nodes.begin(), nodes.end());
    y.insert(y.end(), values.begin(), values.end());
    return PchipInterpolant(x, y)(t);
}

bool Field::all_finite() const {
    if (!std::isfinite(value_at_zero)) return false;
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

Field zero_field(const GridPtr& g) { return Field(g); }

double sup_norm(const Field& f) {
    double m = std::abs(f.value_at_zero);
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double sup_dist(const Field& a, const Field& b) {
    require_same_grid(a, b, "sup_dist");
    double m = std::abs(a.value_at_zero - b.value_at_zero);
    for (size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

Field operator+(const Field& a, const Field& b) {
    require_same_grid(a, b, "field +");
    Field r(a.grid);
    for (size_t i = 0; i < a.values.size(); ++i) r.values[i] = a.values[i] + b.values[i];
    r.value_at_zero = a.value_at_zero + b.value_at_zero;
    return r;
}

Field operator-(const Field& a, const Field& b) {
    require_same_grid(a, b, "field -");
    Field r(a.grid);
    for (size_t i = 0; i < a.values.size(); ++i) r.values[i] = a.values[i] - b.values[i];
    r.value_at_zero = a.value_at_zero - b.value_at_zero;
    return r;
}

Field operator*(double c, const Field& a) {
    Field r(a.grid);
    for (size_t i = 0; i < a.values.size(); ++i) r.values[i] = c * a.values[i];
    r.value_at_zero = c * a.value_at_zero;
    return r;
}

Field shifted(const Field& a, double c) {
    Field r = a;
    for (double& v : r.values) v += c;
    r.value_at_zero += c;
    return r;
}

double extrapolate_to_zero(const Field& f) {
    return PchipInterpolant(f.grid->nodes, f.values)(0.0);
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
    if (a.grid == b.grid) return;
    if (a.grid && b.grid && a.grid->same_nodes_as(*b.grid)) return;
    throw contract_error(std::string(where) + ": fields live on different grids");
}

}  // namespace gibbstree
