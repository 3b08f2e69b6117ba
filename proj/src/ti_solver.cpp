#include "gibbstree/ti_solver.hpp"

#include <algorithm>
#include <cmath>

#include "gibbstree/errors.hpp"
#include "gibbstree/transfer.hpp"

namespace gibbstree {

TiSolution solve_ti(const Kernel& kern, int k, const Field& h0, const SolveOptions& opts) {
    if (!h0.all_finite()) throw contract_error("solve_ti: h0 is not finite");
    if (h0.value_at_zero != 0.0) throw contract_error("solve_ti: h0(0) must be 0");

    const double blow_up = 10.0 * band_amplitude(h_bounds(kern, k));
    double damping = opts.damping;

    Field h = h0;
    Field image = apply_transfer_k(kern, k, h);
    double res = sup_dist(h, image);

    TiSolution best{h, res, 0, res < opts.tol};
    Field prev = h;  // iterate two steps back, for the period-2 diagnostic

    for (int it = 1; it <= opts.max_iter && best.residual >= opts.tol; ++it) {
        Field next = (damping == 1.0) ? image : ((1.0 - damping) * h + damping * image);
        next.value_at_zero = 0.0;
        Field next_image = apply_transfer_k(kern, k, next);
        double next_res = sup_dist(next, next_image);

        if (next_res > blow_up)
            throw divergence_error("solve_ti: residual exceeded 10 * sup h_max");
        if (next_res > res && damping > 1.0 / 64.0) damping *= 0.5;

        if (it >= 2 && sup_dist(next, prev) < opts.tol && next_res > opts.tol) {
            best.limit_cycle = true;
            best.limit_cycle_gap = next_res;
        }

        prev = h;
        h = next;
        image = next_image;
        res = next_res;
        if (res < best.residual) {
            best.h = h;
            best.residual = res;
            best.iterations = it;
        }
        if (best.limit_cycle) break;
    }
    best.converged = best.residual < opts.tol;
    return best;
}

std::vector<Field> standard_inits(const Kernel& kern, int k) {
    const FieldBand band = h_bounds(kern, k);
    const auto& nodes = kern.grid->nodes;
    std::vector<Field> inits;
    inits.push_back(zero_field(kern.grid));
    for (double s : {0.25, -0.25, 0.5, -0.5, 0.9, -0.9}) {
        Field f = s * band.hi;
        f.value_at_zero = 0.0;
        inits.push_back(std::move(f));
    }
    for (double s : {1.0, -1.0}) {
        Field f(kern.grid);
        for (int i = 0; i < f.size(); ++i)
            f.values[i] = s * (nodes[i] - 0.5) * band.hi.values[i];
        inits.push_back(std::move(f));
    }
    return inits;
}

std::vector<TiSolution> find_ti_multi(const Kernel& kern, int k, std::span<const Field> inits,
                                      double tol, double distinct_eps) {
    if (inits.empty()) throw contract_error("find_ti_multi: need at least one init");
    SolveOptions opts;
    opts.tol = tol;
    std::vector<TiSolution> found;
    for (const Field& h0 : inits) {
        TiSolution sol;
        try {
            sol = solve_ti(kern, k, h0, opts);
        } catch (const divergence_error&) {
            continue;
        }
        if (!sol.converged) continue;
        bool dup = false;
        for (const TiSolution& other : found)
            if (sup_dist(sol.h, other.h) < distinct_eps) {
                dup = true;
                break;
            }
        if (!dup) found.push_back(std::move(sol));
    }
    std::sort(found.begin(), found.end(),
              [](const TiSolution& a, const TiSolution& b) { return sup_norm(a.h) < sup_norm(b.h); });
    return found;
}

}  // namespace gibbstree
