#include "gibbstree/measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gibbstree/errors.hpp"
#include "gibbstree/interp.hpp"

namespace gibbstree {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// ln sum_j w_j e^{v_j} with max-subtraction.
double log_integral_exp(const std::vector<double>& w, const std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    double acc = 0.0;
    for (size_t j = 0; j < v.size(); ++j) acc += w[j] * std::exp(v[j] - m);
    if (!(acc > 0.0) || !std::isfinite(acc))
        throw numeric_error("log-scale integral underflowed despite scaling");
    return m + std::log(acc);
}

/// ln sum_j w_j K_row(j) e^{v_j} with max-subtraction of v.
template <typename Row>
double log_kernel_integral(const std::vector<double>& w, const Row& krow,
                           const std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    double acc = 0.0;
    for (size_t j = 0; j < v.size(); ++j) acc += w[j] * krow(j) * std::exp(v[j] - m);
    if (!(acc > 0.0) || !std::isfinite(acc))
        throw numeric_error("log-scale kernel integral underflowed despite scaling");
    return m + std::log(acc);
}

std::int64_t parent_rank(int level, std::int64_t rank, int k) {
    return level <= 1 ? 0 : rank / k;
}

}  // namespace

double Configuration::at(const VertexAddr& addr) const {
    return spins.at(addr.depth()).at(rank_in_level(addr, k, mode));
}

double& Configuration::at(const VertexAddr& addr) {
    return spins.at(addr.depth()).at(rank_in_level(addr, k, mode));
}

MessageSet messages(const Kernel& kern, const VertexField& vf) {
    const auto& g = *kern.grid;
    const int n = g.n_nodes();
    const int depth = vf.depth;
    MessageSet ms;
    ms.log_z.resize(depth + 1);
    ms.log_z_at0.resize(depth + 1);
    ms.log_z_at1.resize(depth + 1);
    ms.log_edge.resize(depth + 1);
    ms.log_edge_at0.resize(depth + 1);
    ms.log_edge_at1.resize(depth + 1);

    std::vector<double> row1(n);
    for (int j = 0; j < n; ++j) row1[j] = kern.eval(1.0, g.nodes[j]);

    for (int l = depth; l >= 0; --l) {
        const auto& fields = vf.levels[l];
        const size_t count = fields.size();
        ms.log_z[l].resize(count);
        ms.log_z_at0[l].resize(count);
        ms.log_z_at1[l].resize(count);
        for (size_t r = 0; r < count; ++r) {
            if (l == depth) {
                // boundary: z = e^h
                ms.log_z[l][r] = fields[r].values;
                ms.log_z_at0[l][r] = fields[r].value_at_zero;
                ms.log_z_at1[l][r] = fields[r].eval_at(1.0);
            } else {
                const size_t nchild = (l == 0) ? ms.log_edge[l + 1].size()
                                               : static_cast<size_t>(vf.k);
                const size_t base = (l == 0) ? 0 : r * vf.k;
                std::vector<double> acc(n, 0.0);
                double acc0 = 0.0, acc1 = 0.0;
                for (size_t c = 0; c < nchild; ++c) {
                    const auto& edge = ms.log_edge[l + 1][base + c];
                    for (int j = 0; j < n; ++j) acc[j] += edge[j];
                    acc0 += ms.log_edge_at0[l + 1][base + c];
                    acc1 += ms.log_edge_at1[l + 1][base + c];
                }
                ms.log_z[l][r] = std::move(acc);
                ms.log_z_at0[l][r] = acc0;
                ms.log_z_at1[l][r] = acc1;
            }
        }
        // edge factors toward the parents (not needed above the root)
        if (l >= 1) {
            ms.log_edge[l].resize(count);
            ms.log_edge_at0[l].resize(count);
            ms.log_edge_at1[l].resize(count);
            for (size_t r = 0; r < count; ++r) {
                const auto& lz = ms.log_z[l][r];
                std::vector<double> edge(n);
                for (int i = 0; i < n; ++i)
                    edge[i] = log_kernel_integral(
                        g.weights, [&](int j) { return kern.node_matrix(i, j); }, lz);
                ms.log_edge[l][r] = std::move(edge);
                ms.log_edge_at0[l][r] = log_kernel_integral(
                    g.weights, [&](int j) { return kern.row0(j); }, lz);
                ms.log_edge_at1[l][r] =
                    log_kernel_integral(g.weights, [&](int j) { return row1[j]; }, lz);
            }
        }
    }
    ms.log_partition = log_integral_exp(g.weights, ms.log_z[0][0]);
    return ms;
}

namespace {

Field normalized_density(const GridPtr& grid, const std::vector<double>& log_vals,
                         double log_at0) {
    const auto& g = *grid;
    const double m = *std::max_element(log_vals.begin(), log_vals.end());
    Field dens(grid);
    for (int i = 0; i < g.n_nodes(); ++i) dens.values[i] = std::exp(log_vals[i] - m);
    const double total = g.integrate(dens.values);
    for (double& v : dens.values) v /= total;
    dens.value_at_zero = std::exp(log_at0 - m) / total;
    return dens;
}

}  // namespace

Field root_marginal(const Kernel& kern, const VertexField& vf) {
    const MessageSet ms = messages(kern, vf);
    return normalized_density(kern.grid, ms.log_z[0][0], ms.log_z_at0[0][0]);
}

double log_density(const Kernel& kern, const VertexField& vf, const Configuration& sigma) {
    if (sigma.depth != vf.depth || sigma.k != vf.k || sigma.mode != vf.mode)
        throw contract_error("log_density: configuration does not match the vertex field");
    for (const auto& lev : sigma.spins)
        for (double s : lev)
            if (!(s >= 0.0 && s <= 1.0))
                throw contract_error("log_density: spin outside [0,1]");

    double acc = 0.0;
    // pair terms over the edges of V_n
    for (int l = 1; l <= vf.depth; ++l) {
        for (size_t r = 0; r < sigma.spins[l].size(); ++r) {
            const double child = sigma.spins[l][r];
            const double parent = sigma.spins[l - 1][parent_rank(l, r, vf.k)];
            acc += std::log(kern.eval(parent, child));
        }
    }
    // boundary fields at W_n
    for (size_t r = 0; r < sigma.spins[vf.depth].size(); ++r)
        acc += vf.levels[vf.depth][r].eval_at(sigma.spins[vf.depth][r]);
    return acc - messages(kern, vf).log_partition;
}

CompatReport check_compatibility(const Kernel& kern, const VertexField& vf, int n_samples,
                                 std::uint64_t rng_seed, double tol) {
    if (vf.depth < 1) throw contract_error("check_compatibility: depth must be >= 1");
    if (n_samples < 1) throw contract_error("check_compatibility: n_samples must be >= 1");
    const int n = kern.n();
    const VertexField prev = vf.restricted(vf.depth - 1);
    const double log_zn = messages(kern, vf).log_partition;
    const double log_zp = messages(kern, prev).log_partition;
    const int m = vf.depth - 1;  // level carrying the compared boundary

    std::mt19937_64 rng(rng_seed);
    CompatReport report;
    report.n_samples = n_samples;
    for (int s = 0; s < n_samples; ++s) {
        // spins on W_{n-1} drawn from the grid nodes; the edge terms inside
        // V_{n-1} are identical on both sides and cancel, so only the boundary
        // level matters for the comparison.
        double lhs = -log_zn, rhs = -log_zp;
        for (size_t r = 0; r < vf.levels[m].size(); ++r) {
            const int idx = std::min<int>(n - 1, static_cast<int>(uniform01(rng) * n));
            rhs += vf.levels[m][r].values[idx];
            const size_t nchild = (m == 0) ? vf.levels[m + 1].size() : static_cast<size_t>(vf.k);
            const size_t base = (m == 0) ? 0 : r * vf.k;
            for (size_t c = 0; c < nchild; ++c) {
                const auto& hv = vf.levels[m + 1][base + c].values;
                lhs += log_kernel_integral(
                    kern.grid->weights, [&](int j) { return kern.node_matrix(idx, j); }, hv);
            }
        }
        report.max_rel_err = std::max(report.max_rel_err, std::abs(std::expm1(lhs - rhs)));
    }
    report.residual = residual(kern, vf).max_res;
    report.pass = report.max_rel_err < tol && report.residual < tol;
    return report;
}

Sampler::Sampler(const Kernel& kern, const VertexField& vf)
    : kern_(kern), vf_(vf), ms_(messages(kern, vf)) {
    row1_.resize(kern.n());
    for (int j = 0; j < kern.n(); ++j) row1_[j] = kern.eval(1.0, kern.grid->nodes[j]);
}

double Sampler::draw_site(int level, std::int64_t rank, bool has_parent, double parent_spin,
                          double unit) const {
    const auto& g = *kern_.grid;
    const int n = g.n_nodes();
    // log-density at the knots {0, nodes..., 1}
    std::vector<double> x, lv;
    x.reserve(n + 2);
    lv.reserve(n + 2);
    x.push_back(0.0);
    lv.push_back(ms_.log_z_at0[level][rank] +
                 (has_parent ? std::log(kern_.eval(parent_spin, 0.0)) : 0.0));
    for (int j = 0; j < n; ++j) {
        x.push_back(g.nodes[j]);
        lv.push_back(ms_.log_z[level][rank][j] +
                     (has_parent ? std::log(kern_.eval(parent_spin, g.nodes[j])) : 0.0));
    }
    x.push_back(1.0);
    lv.push_back(ms_.log_z_at1[level][rank] +
                 (has_parent ? std::log(kern_.eval(parent_spin, 1.0)) : 0.0));

    const double m = *std::max_element(lv.begin(), lv.end());
    std::vector<double> dens(lv.size());
    for (size_t i = 0; i < lv.size(); ++i) dens[i] = std::exp(lv[i] - m);

    // inverse CDF through the monotone-cubic density
    const PchipInterpolant interp(x, dens);
    const double total = interp.total_integral();
    const double target = unit * total;
    double lo = 0.0, hi = 1.0;
    double t = 0.5;
    for (int it = 0; it < 80; ++it) {
        const double f = interp.integral_to(t) - target;
        if (f > 0)
            hi = t;
        else
            lo = t;
        const double dens_t = interp(t);
        double step = dens_t > 0 ? f / dens_t : 0.0;
        double tn = t - step;
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        if (std::abs(tn - t) < 1e-14) {
            t = tn;
            break;
        }
        t = tn;
    }
    return std::clamp(t, 0.0, 1.0);
}

Configuration Sampler::sample(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    Configuration cfg;
    cfg.k = vf_.k;
    cfg.depth = vf_.depth;
    cfg.mode = vf_.mode;
    cfg.spins.resize(vf_.depth + 1);
    for (int l = 0; l <= vf_.depth; ++l) cfg.spins[l].resize(vf_.levels[l].size());

    cfg.spins[0][0] = draw_site(0, 0, false, 0.0, uniform01(rng));
    for (int l = 1; l <= vf_.depth; ++l) {
        for (size_t r = 0; r < cfg.spins[l].size(); ++r) {
            const double parent = cfg.spins[l - 1][parent_rank(l, r, vf_.k)];
            cfg.spins[l][r] = draw_site(l, static_cast<std::int64_t>(r), true, parent,
                                        uniform01(rng));
        }
    }
    return cfg;
}

std::vector<Configuration> Sampler::sample_many(int count, std::uint64_t master_seed) const {
    std::vector<Configuration> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(sample(master_seed + i));
    return out;
}

Configuration sample_configuration(const Kernel& kern, const VertexField& vf,
                                   std::uint64_t rng_seed) {
    return Sampler(kern, vf).sample(rng_seed);
}

Field marginal_at(const Kernel& kern, const VertexField& vf, const VertexAddr& x) {
    if (x.depth() > vf.depth) throw contract_error("marginal_at: vertex outside the volume");
    if (x.is_root()) return root_marginal(kern, vf);

    const MessageSet ms = messages(kern, vf);
    const auto& g = *kern.grid;
    const int n = g.n_nodes();

    // downward pass along the root -> x chain
    std::vector<double> log_down(n, 0.0);
    double log_down0 = 0.0;
    VertexAddr cur;  // root
    for (int l = 0; l < x.depth(); ++l) {
        const std::int64_t cur_rank = rank_in_level(cur, vf.k, vf.mode);
        VertexAddr next = cur;
        next.digits.push_back(x.digits[l]);
        const std::int64_t next_rank = rank_in_level(next, vf.k, vf.mode);

        // weight at the current vertex excluding the branch toward `next`:
        // downward message so far plus the sibling subtree factors
        std::vector<double> site(n);
        for (int i = 0; i < n; ++i)
            site[i] = log_down[i] + ms.log_z[l][cur_rank][i] -
                      ms.log_edge[l + 1][next_rank][i];

        // integrate the current spin against K(t, u) toward the child
        std::vector<double> next_down(n);
        for (int j = 0; j < n; ++j)
            next_down[j] = log_kernel_integral(
                g.weights, [&](int i) { return kern.node_matrix(i, j); }, site);
        log_down0 = log_kernel_integral(g.weights, [&](int i) { return kern.col0(i); }, site);
        log_down = std::move(next_down);
        cur = next;
    }
    const std::int64_t x_rank = rank_in_level(x, vf.k, vf.mode);
    std::vector<double> log_marg(n);
    for (int i = 0; i < n; ++i) log_marg[i] = log_down[i] + ms.log_z[x.depth()][x_rank][i];
    const double log_marg0 = log_down0 + ms.log_z_at0[x.depth()][x_rank];
    return normalized_density(kern.grid, log_marg, log_marg0);
}

}  // namespace gibbstree
