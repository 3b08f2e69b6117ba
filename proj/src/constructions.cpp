#include "gibbstree/constructions.hpp"

#include <algorithm>
#include <cmath>

#include "gibbstree/errors.hpp"
#include "gibbstree/transfer.hpp"

namespace gibbstree {

namespace {
constexpr std::int64_t kVertexCap = 10'000'000;

void check_band_interior(const Kernel& kern, int k, const Field& f, const char* what,
                         double margin = 1e-9) {
    const FieldBand band = h_bounds(kern, k);
    for (int i = 0; i < f.size(); ++i) {
        if (!(f.values[i] > band.lo.values[i] + margin &&
              f.values[i] < band.hi.values[i] - margin))
            throw contract_error(std::string(what) +
                                 " must lie strictly inside the (h_min, h_max) band");
    }
}

void check_fixed_point(const Kernel& kern, int k, const Field& f, const char* what,
                       double fp_tol) {
    const double res = sup_dist(f, apply_transfer_k(kern, k, f));
    if (res >= fp_tol)
        throw contract_error(std::string(what) + " is not a fixed point of kA (residual " +
                             std::to_string(res) + ")");
}

}  // namespace

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Art: return "art";
        case Provenance::Bg: return "bg";
        case Provenance::Zachary: return "zachary";
        case Provenance::Constant: return "constant";
        case Provenance::Manual: return "manual";
    }
    return "?";
}

const Field& VertexField::at(const VertexAddr& addr) const {
    return levels.at(addr.depth()).at(rank_in_level(addr, k, mode));
}

Field& VertexField::at(const VertexAddr& addr) {
    return levels.at(addr.depth()).at(rank_in_level(addr, k, mode));
}

VertexField VertexField::restricted(int new_depth) const {
    if (new_depth < 0 || new_depth > depth)
        throw contract_error("restricted: depth out of range");
    VertexField out = *this;
    out.depth = new_depth;
    out.levels.resize(new_depth + 1);
    return out;
}

std::int64_t VertexField::vertex_count() const {
    std::int64_t total = 0;
    for (const auto& lev : levels) total += static_cast<std::int64_t>(lev.size());
    return total;
}

namespace {

VertexField make_vertexfield_shell(int k, int depth, TreeMode mode, Provenance prov) {
    if (depth < 0) throw contract_error("vertex field depth must be >= 0");
    VertexField vf;
    vf.k = k;
    vf.depth = depth;
    vf.mode = mode;
    vf.provenance = prov;
    vf.levels.resize(depth + 1);
    std::int64_t total = 0;
    for (int l = 0; l <= depth; ++l) {
        total += level_size(k, l, mode);
        if (total > kVertexCap) throw resource_error("vertex field exceeds the vertex cap");
    }
    return vf;
}

void check_vertex_field_zero_pin(const Field& f) {
    if (f.value_at_zero != 0.0)
        throw contract_error("vertex fields must vanish at t = 0");
}

}  // namespace

VertexField field_to_vertexfield(std::span<const Field> levels_by_depth, int k, int depth,
                                 TreeMode mode, Provenance prov) {
    if (static_cast<int>(levels_by_depth.size()) < depth + 1)
        throw contract_error("field_to_vertexfield: need depth+1 level fields");
    VertexField vf = make_vertexfield_shell(k, depth, mode, prov);
    for (int l = 0; l <= depth; ++l) {
        check_vertex_field_zero_pin(levels_by_depth[l]);
        vf.levels[l].assign(level_size(k, l, mode), levels_by_depth[l]);
    }
    return vf;
}

VertexField field_to_vertexfield(const Field& everywhere, int k, int depth, TreeMode mode,
                                 Provenance prov) {
    check_vertex_field_zero_pin(everywhere);
    VertexField vf = make_vertexfield_shell(k, depth, mode, prov);
    for (int l = 0; l <= depth; ++l)
        vf.levels[l].assign(level_size(k, l, mode), everywhere);
    return vf;
}

ResidualReport residual(const Kernel& kern, const VertexField& vf) {
    if (vf.depth < 1) throw contract_error("residual: vertex field depth must be >= 1");
    ResidualReport report;
    for (int l = 0; l < vf.depth; ++l) {
        const auto& parents = vf.levels[l];
        const auto& children = vf.levels[l + 1];
        // A is evaluated once per child; children of the parent at `rank`
        // occupy the contiguous block [rank*k, (rank+1)*k) — except the root,
        // whose block is all of W_1 (k+1 children in full mode).
        std::vector<Field> child_updates(children.size());
        for (size_t c = 0; c < children.size(); ++c)
            child_updates[c] = apply_transfer(kern, children[c]);
        for (size_t rank = 0; rank < parents.size(); ++rank) {
            const size_t nchild = (l == 0) ? children.size() : static_cast<size_t>(vf.k);
            const size_t base = (l == 0) ? 0 : rank * vf.k;
            Field sum(parents[rank].grid);
            for (size_t c = 0; c < nchild; ++c) sum = sum + child_updates[base + c];
            const double res = sup_dist(parents[rank], sum);
            if (res > report.max_res) {
                report.max_res = res;
                report.worst = addr_from_rank(l, static_cast<std::int64_t>(rank), vf.k, vf.mode);
            }
        }
    }
    return report;
}

VertexField art_lift(const Kernel& kern, const VertexField& f_mu, int k, int depth,
                     double fp_tol) {
    if (k <= f_mu.k) throw contract_error("art_lift: target order must exceed the source order");
    if (f_mu.mode != TreeMode::Half)
        throw contract_error("art_lift: the lift is defined on the half-tree");
    if (depth > f_mu.depth)
        throw contract_error("art_lift: source field is shallower than the requested depth");
    const ZeroMeanReport zm = check_zero_mean(kern);
    if (!zm.holds)
        throw contract_error(
            "art_lift: the kernel does not satisfy the zero-mean condition (max_dev " +
            std::to_string(zm.max_dev) + "); the lift is not a solution without it");
    if (f_mu.depth >= 1) {
        const double res = residual(kern, f_mu).max_res;
        if (res >= fp_tol)
            throw contract_error("art_lift: source field does not solve its own equation");
    }

    VertexField out = make_vertexfield_shell(k, depth, TreeMode::Half, Provenance::Art);
    const Field free_field = zero_field(f_mu.levels[0][0].grid);
    for (int l = 0; l <= depth; ++l) {
        const std::int64_t size = level_size(k, l, TreeMode::Half);
        out.levels[l].assign(size, free_field);
        for (std::int64_t rk = 0; rk < size; ++rk) {
            VertexAddr addr = addr_from_rank(l, rk, k, TreeMode::Half);
            const bool embedded = std::all_of(addr.digits.begin(), addr.digits.end(),
                                              [&](std::uint8_t d) { return d < f_mu.k; });
            if (embedded) out.levels[l][rk] = f_mu.at(addr);
        }
    }
    return out;
}

namespace {

struct BgBoundary {
    const Field& h;
    const Field& eta;
    const Field& seed;
};

VertexField bg_recursion(const Kernel& kern, int k, const Path& p, int n, const BgBoundary& b) {
    VertexField vf = make_vertexfield_shell(k, n, TreeMode::Half, Provenance::Bg);
    // boundary level
    {
        const std::int64_t size = level_size(k, n, TreeMode::Half);
        vf.levels[n].reserve(size);
        for (std::int64_t rk = 0; rk < size; ++rk) {
            VertexAddr addr = addr_from_rank(n, rk, k, TreeMode::Half);
            switch (compare_to_path(addr, p)) {
                case PathSide::Left: vf.levels[n].push_back(b.h); break;
                case PathSide::Right: vf.levels[n].push_back(b.eta); break;
                case PathSide::On: vf.levels[n].push_back(b.seed); break;
            }
        }
    }
    for (int l = n - 1; l >= 0; --l) {
        const auto& children = vf.levels[l + 1];
        std::vector<Field> child_updates(children.size());
        for (size_t c = 0; c < children.size(); ++c)
            child_updates[c] = apply_transfer(kern, children[c]);
        const std::int64_t size = level_size(k, l, TreeMode::Half);
        vf.levels[l].reserve(size);
        for (std::int64_t rk = 0; rk < size; ++rk) {
            Field sum(b.h.grid);
            for (int c = 0; c < k; ++c) sum = sum + child_updates[rk * k + c];
            vf.levels[l].push_back(std::move(sum));
        }
    }
    return vf;
}

void check_bg_inputs(const Kernel& kern, int k, const Field& h, const Field& eta, const Path& p,
                     int n, const Field& seed, double fp_tol) {
    if (n < 1) throw contract_error("bg_field: depth must be >= 1");
    if (p.k != k) throw contract_error("bg_field: path branching order mismatch");
    if (static_cast<int>(p.digits.size()) < n)
        throw contract_error("bg_field: path is shallower than the requested depth");
    if (seed.value_at_zero != 0.0) throw contract_error("bg_field: seed(0) must be 0");
    check_fixed_point(kern, k, h, "bg_field: h", fp_tol);
    check_fixed_point(kern, k, eta, "bg_field: eta", fp_tol);
    check_band_interior(kern, k, seed, "bg_field: seed");
}

}  // namespace

VertexField bg_field(const Kernel& kern, int k, const Field& h, const Field& eta, const Path& p,
                     int n, const Field& seed, double fp_tol) {
    check_bg_inputs(kern, k, h, eta, p, n, seed, fp_tol);
    return bg_recursion(kern, k, p, n, {h, eta, seed});
}

std::vector<SeedSensitivityRow> bg_seed_sensitivity(const Kernel& kern, int k, const Field& h,
                                                    const Field& eta, const Path& p, int n,
                                                    const Field& seed_a, const Field& seed_b,
                                                    double alpha_hat, double margin,
                                                    double fp_tol) {
    check_bg_inputs(kern, k, h, eta, p, n, seed_a, fp_tol);
    check_band_interior(kern, k, seed_b, "bg_seed_sensitivity: seed_b");
    if (seed_b.value_at_zero != 0.0)
        throw contract_error("bg_seed_sensitivity: seed_b(0) must be 0");

    const VertexField fa = bg_recursion(kern, k, p, n, {h, eta, seed_a});
    const VertexField fb = bg_recursion(kern, k, p, n, {h, eta, seed_b});

    std::vector<double> diff(n + 1);
    for (int m = 0; m <= n; ++m) {
        VertexAddr xm;
        xm.digits.assign(p.digits.begin(), p.digits.begin() + m);
        diff[m] = sup_dist(fa.at(xm), fb.at(xm));
    }
    std::vector<SeedSensitivityRow> rows(n + 1);
    for (int m = 0; m <= n; ++m) {
        rows[m].level = m;
        rows[m].sup_diff = diff[m];
        rows[m].bound = std::pow(alpha_hat + margin, n - m) * diff[n];
        rows[m].within = diff[m] <= rows[m].bound + 1e-14;
    }
    return rows;
}

Field bg_limit_field(const Kernel& kern, int k, const Field& h, const Field& eta, double r,
                     int depth_m, double tol, double fp_tol) {
    if (depth_m < 0) throw contract_error("bg_limit_field: depth must be >= 0");
    check_fixed_point(kern, k, h, "bg_limit_field: h", fp_tol);
    check_fixed_point(kern, k, eta, "bg_limit_field: eta", fp_tol);

    const Field a_h = apply_transfer(kern, h);
    const Field a_eta = apply_transfer(kern, eta);
    Field seed = 0.5 * (h + eta);
    seed.value_at_zero = 0.0;

    // Path-reduced recursion: v_{l-1} = A(v_l) + (#left children) A(h)
    // + (#right children) A(eta); off-path subtrees reproduce the fixed points.
    auto value_at_m = [&](int n, const Path& p) {
        Field v = seed;
        for (int l = n; l > depth_m; --l) {
            const int d = p.digits[l - 1];  // digit taking x_{l-1} to x_l
            Field sum = apply_transfer(kern, v);
            for (int c = 0; c < d; ++c) sum = sum + a_h;
            for (int c = d + 1; c < k; ++c) sum = sum + a_eta;
            v = std::move(sum);
        }
        return v;
    };

    constexpr int kMaxBoundaryDepth = 400;
    Field prev;
    double last_gap = 0.0;
    bool have_prev = false;
    for (int n = depth_m + 1; n <= kMaxBoundaryDepth; ++n) {
        const Path p = path_from_r(r, k, n);
        Field cur = value_at_m(n, p);
        if (have_prev) {
            last_gap = sup_dist(cur, prev);
            if (last_gap < tol) return cur;
        }
        prev = std::move(cur);
        have_prev = true;
    }
    throw no_convergence_error("bg_limit_field: no convergence before the depth cap", last_gap);
}

ZacharyResult zachary_levels(const Kernel& kern, int k, const Field& zeta0, int N, double tol) {
    if (N < 1) throw contract_error("zachary_levels: N must be >= 1");
    if (zeta0.value_at_zero != 0.0) throw contract_error("zachary_levels: zeta0(0) must be 0");
    check_band_interior(kern, k, zeta0, "zachary_levels: zeta0");

    const FieldBand band = h_bounds(kern, k);
    ZacharyResult out;
    out.zeta.push_back(zeta0);
    for (int n = 0; n < N; ++n) {
        InverseResult inv;
        try {
            inv = invert_transfer_k_detailed(kern, k, out.zeta.back(), tol);
        } catch (const numeric_error& e) {
            out.failed_level = n + 1;
            out.message = std::string("inversion failed at level ") + std::to_string(n + 1) +
                          ": " + e.what();
            return out;
        }
        if (inv.residual >= tol) {
            out.failed_level = n + 1;
            out.message = "no preimage within tolerance at level " + std::to_string(n + 1) +
                          " (best residual " + std::to_string(inv.residual) +
                          "); the seed has left the range of the k-fold operator";
            return out;
        }
        // Absorb the range defect into the stored representative of level n;
        // kA is shift-invariant, so the level n-1 equation is untouched.
        Field& stored = out.zeta.back();
        stored = shifted(stored, -inv.target_shift);
        stored.value_at_zero = 0.0;
        out.shifts.push_back(inv.target_shift);
        out.level_residuals.push_back(inv.residual);

        for (int i = 0; i < inv.preimage.size(); ++i) {
            if (!(inv.preimage.values[i] > band.lo.values[i] &&
                  inv.preimage.values[i] < band.hi.values[i])) {
                out.failed_level = n + 1;
                out.message = "level " + std::to_string(n + 1) +
                              " exited the (h_min, h_max) band at node " + std::to_string(i);
                return out;
            }
        }
        out.zeta.push_back(std::move(inv.preimage));
    }
    out.completed = true;
    return out;
}

}  // namespace gibbstree
