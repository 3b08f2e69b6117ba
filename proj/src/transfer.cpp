#include "gibbstree/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gibbstree/errors.hpp"
#include "gibbstree/interp.hpp"

namespace gibbstree {

namespace {

void require_kernel_grid(const Kernel& kern, const Field& h, const char* where) {
    if (kern.grid == h.grid) return;
    if (kern.grid && h.grid && kern.grid->same_nodes_as(*h.grid)) return;
    throw contract_error(std::string(where) + ": field grid does not match kernel caches");
}

Eigen::VectorXd scaled_exp(const Field& h, const Eigen::Map<const Eigen::VectorXd>& w) {
    // w_j e^{h_j - max h}; the subtracted constant cancels in every ratio.
    Eigen::Map<const Eigen::VectorXd> hv(h.values.data(), h.size());
    const double m = hv.maxCoeff();
    return w.array() * (hv.array() - m).exp();
}

double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa draw; bit-stable across platforms.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Field apply_transfer(const Kernel& kern, const Field& h) {
    require_kernel_grid(kern, h, "apply_transfer");
    Eigen::Map<const Eigen::VectorXd> w(kern.grid->weights.data(), kern.n());
    const Eigen::VectorXd mu = scaled_exp(h, w);
    const Eigen::VectorXd N = kern.node_matrix * mu;
    const double N0 = kern.row0.dot(mu);
    if (!(N0 > 0.0) || !N.allFinite())
        throw numeric_error("apply_transfer: non-finite integrals");
    Field out(h.grid);
    const double log_n0 = std::log(N0);
    for (int i = 0; i < kern.n(); ++i) {
        out.values[i] = std::log(N(i)) - log_n0;
        if (!std::isfinite(out.values[i]))
            throw numeric_error("apply_transfer: non-finite result");
    }
    out.value_at_zero = 0.0;  // ln(N0/N0), exact
    return out;
}

Field apply_transfer_k(const Kernel& kern, int k, const Field& h) {
    if (k < 1) throw contract_error("apply_transfer_k: k must be >= 1");
    Field out = apply_transfer(kern, h);
    for (double& v : out.values) v *= k;
    return out;
}

Eigen::MatrixXd transfer_jacobian(const Kernel& kern, const Field& h) {
    require_kernel_grid(kern, h, "transfer_jacobian");
    Eigen::Map<const Eigen::VectorXd> w(kern.grid->weights.data(), kern.n());
    const Eigen::VectorXd mu = scaled_exp(h, w);
    const Eigen::VectorXd N = kern.node_matrix * mu;
    const double N0 = kern.row0.dot(mu);
    const int n = kern.n();
    Eigen::MatrixXd J(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            J(i, j) = mu(j) * (kern.node_matrix(i, j) / N(i) - kern.row0(j) / N0);
    return J;
}

namespace {

// Newton fallback for kernels whose node matrix is rank-deficient. Steps are
// SVD-regularized with damping proportional to the residual, the merit is the
// residual 2-norm, and iterates are re-pinned by extrapolation to t = 0.
InverseResult invert_newton(const Kernel& kern, int k, const Field& target, double tol,
                            int max_iter) {
    const int n = kern.n();
    Field x = (1.0 / k) * target;
    x = shifted(x, -extrapolate_to_zero(x));
    x.value_at_zero = 0.0;

    auto residual_vec = [&](const Field& f) {
        Field r = apply_transfer_k(kern, k, f) - target;
        return Eigen::Map<const Eigen::VectorXd>(r.values.data(), n).eval();
    };

    Eigen::VectorXd r = residual_vec(x);
    double best_res = r.cwiseAbs().maxCoeff();
    InverseResult out{x, 0.0, best_res, 0, false};
    for (int it = 0; it < max_iter; ++it) {
        const double rs = r.cwiseAbs().maxCoeff();
        if (rs < tol) {
            out.preimage = x;
            out.residual = rs;
            out.iterations = it;
            return out;
        }
        Eigen::MatrixXd J = k * transfer_jacobian(kern, x);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& s = svd.singularValues();
        const double lam = s(0) * std::min(0.3, rs);
        Eigen::VectorXd c = svd.matrixU().transpose() * r;
        Eigen::VectorXd filt(n);
        for (int i = 0; i < n; ++i) filt(i) = s(i) * c(i) / (s(i) * s(i) + lam * lam);
        Eigen::VectorXd dx = -(svd.matrixV() * filt);

        const double f0 = r.squaredNorm();
        double step = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 30; ++ls) {
            Field xn = x;
            for (int i = 0; i < n; ++i) xn.values[i] += step * dx(i);
            xn = shifted(xn, -extrapolate_to_zero(xn));
            xn.value_at_zero = 0.0;
            Eigen::VectorXd rn = residual_vec(xn);
            if (rn.squaredNorm() < f0) {
                x = xn;
                r = rn;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        double cur = r.cwiseAbs().maxCoeff();
        if (cur < best_res) {
            best_res = cur;
            out.preimage = x;
            out.residual = cur;
            out.iterations = it + 1;
        }
        if (!moved) break;  // line search exhausted: stagnation
    }
    out.residual = best_res;
    return out;
}

}  // namespace

InverseResult invert_transfer_k_detailed(const Kernel& kern, int k, const Field& target,
                                         double tol, int max_iter) {
    require_kernel_grid(kern, target, "invert_transfer_k");
    if (k < 1) throw contract_error("invert_transfer_k: k must be >= 1");
    if (target.value_at_zero != 0.0)
        throw contract_error("invert_transfer_k: target(0) must be 0 (every kA output vanishes there)");
    if (!target.all_finite()) throw contract_error("invert_transfer_k: target is not finite");

    const int n = kern.n();
    if (kern.node_matrix_invertible()) {
        Eigen::VectorXd G(n);
        for (int i = 0; i < n; ++i) G(i) = std::exp(target.values[i] / k);
        Eigen::VectorXd mu = kern.solve_node_matrix(G);
        const double lin_res = (kern.node_matrix * mu - G).cwiseAbs().maxCoeff() /
                               G.cwiseAbs().maxCoeff();
        if (mu.minCoeff() > 0.0 && lin_res < 1e-10) {
            // kA(x) = target - d with d the target's range defect; scale mu so
            // that the denominator integral is exactly 1 (the pinned representative).
            const double d = k * std::log(kern.row0.dot(mu));
            mu *= std::exp(-d / k);
            Field x(target.grid);
            for (int i = 0; i < n; ++i)
                x.values[i] = std::log(mu(i) / kern.grid->weights[i]);
            x.value_at_zero = 0.0;
            Field shifted_target = shifted(target, -d);
            shifted_target.value_at_zero = 0.0;
            const double res = sup_dist(apply_transfer_k(kern, k, x), shifted_target);
            return {std::move(x), d, res, 1, true};
        }
        // fall through: target leaves the cone of positive preimage densities
    }
    return invert_newton(kern, k, target, tol, max_iter);
}

Field invert_transfer_k(const Kernel& kern, int k, const Field& target, double tol,
                        int max_iter) {
    InverseResult r = invert_transfer_k_detailed(kern, k, target, tol, max_iter);
    const double total = r.residual + std::abs(r.target_shift);
    if (total >= tol)
        throw no_convergence_error(
            "invert_transfer_k: no preimage within tolerance (best residual " +
                std::to_string(total) + ")",
            total);
    return r.preimage;
}

ContractionEstimate estimate_contraction(const Kernel& kern, int n_samples, double amplitude,
                                         std::uint64_t seed, PairFamily family) {
    if (n_samples < 1) throw contract_error("estimate_contraction: n_samples must be >= 1");
    const int n = kern.n();
    const auto& nodes = kern.grid->nodes;
    std::mt19937_64 rng(seed);

    auto rough = [&]() {
        Field f(kern.grid);
        for (int i = 0; i < n; ++i) f.values[i] = amplitude * (2.0 * uniform01(rng) - 1.0);
        return f;
    };
    auto smooth = [&](double scale) {
        // random quintic in (2t-1), rescaled to the requested sup-norm
        double c[6];
        for (double& ci : c) ci = 2.0 * uniform01(rng) - 1.0;
        Field f(kern.grid);
        double sup = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = 2.0 * nodes[i] - 1.0;
            double acc = 0.0, p = 1.0;
            for (double ci : c) {
                acc += ci * p;
                p *= v;
            }
            f.values[i] = acc;
            sup = std::max(sup, std::abs(acc));
        }
        if (sup > 0.0)
            for (double& v : f.values) v *= scale / sup;
        return f;
    };

    ContractionEstimate est;
    est.n_samples = n_samples;
    est.amplitude = amplitude;
    est.seed = seed;
    est.family = family;
    for (int s = 0; s < n_samples; ++s) {
        Field f, g;
        if (family == PairFamily::Rough) {
            f = rough();
            g = rough();
        } else {
            switch (s % 3) {
                case 0:
                    f = rough();
                    g = rough();
                    break;
                case 1:
                    f = smooth(amplitude * uniform01(rng));
                    g = smooth(amplitude * uniform01(rng));
                    break;
                default: {
                    f = smooth(amplitude * uniform01(rng));
                    const double eps = amplitude * std::pow(10.0, -3.0 * uniform01(rng));
                    g = f + smooth(eps);
                    break;
                }
            }
        }
        const Field Af = apply_transfer(kern, f);
        const Field Ag = apply_transfer(kern, g);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            const double dv = std::abs(f.values[i] - g.values[i]);
            const double da = std::abs(Af.values[i] - Ag.values[i]);
            num = std::max(num, da);
            den = std::max(den, dv);
            if (dv > 1e-6) est.alpha_pointwise = std::max(est.alpha_pointwise, da / dv);
        }
        if (den > 1e-12) est.alpha_sup = std::max(est.alpha_sup, num / den);
    }
    return est;
}

Field range_pinned(const Kernel& kern, int k, const Field& h) {
    require_kernel_grid(kern, h, "range_pinned");
    if (kern.node_matrix_invertible()) {
        const int n = kern.n();
        Eigen::VectorXd G(n);
        for (int i = 0; i < n; ++i) G(i) = std::exp(h.values[i] / k);
        const Eigen::VectorXd mu = kern.solve_node_matrix(G);
        const double dot = kern.row0.dot(mu);
        if (dot > 0.0) {
            Field out = shifted(h, -k * std::log(dot));
            out.value_at_zero = 0.0;
            return out;
        }
    }
    Field out = shifted(h, -extrapolate_to_zero(h));
    out.value_at_zero = 0.0;
    return out;
}

}  // namespace gibbstree
