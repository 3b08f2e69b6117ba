#pragma once

#include <cstdint>
#include <vector>

#include "gibbstree/constructions.hpp"
#include "gibbstree/field.hpp"
#include "gibbstree/kernel.hpp"
#include "gibbstree/tree.hpp"

namespace gibbstree {

/// A spin assignment on the volume V_n, stored like VertexField (per level,
/// lexicographic rank order). Spins live in [0,1].
struct Configuration {
    int k = 2;
    int depth = 0;
    TreeMode mode = TreeMode::Half;
    std::vector<std::vector<double>> spins;  // [level][rank]

    double at(const VertexAddr& addr) const;
    double& at(const VertexAddr& addr);
};

/// Bottom-up partial partition values in log scale.
///
/// log_z[l][r] are ln z(t_i, x) at the grid nodes for the vertex of rank r at
/// level l: z = e^h at the boundary, z(t,x) = prod_y int K(t,u) z(u,y) du
/// inside. log_edge[l][r] is the per-edge factor ln int K(t_i,u) z(u,y) du of
/// the vertex toward its parent. The *_at0 / *_at1 companions are direct
/// kernel evaluations at t = 0 and t = 1 (used by marginals and sampling).
struct MessageSet {
    std::vector<std::vector<std::vector<double>>> log_z;
    std::vector<std::vector<double>> log_z_at0, log_z_at1;
    std::vector<std::vector<std::vector<double>>> log_edge;
    std::vector<std::vector<double>> log_edge_at0, log_edge_at1;
    double log_partition = 0.0;  // ln Z_n
};

MessageSet messages(const Kernel& kern, const VertexField& vf);

/// Probability density of the root spin under the finite-volume distribution,
/// normalized to integrate to 1 on the grid.
Field root_marginal(const Kernel& kern, const VertexField& vf);

/// ln of the finite-volume density of a full configuration on V_n
/// (with respect to the product measure on the volume).
double log_density(const Kernel& kern, const VertexField& vf, const Configuration& sigma);

struct CompatReport {
    int n_samples = 0;
    double max_rel_err = 0.0;
    bool pass = false;
    double residual = 0.0;
};

/// Checks the volume-consistency identity: integrating the depth-n
/// distribution over the boundary spins must reproduce the depth-(n-1)
/// distribution. Evaluated exactly by per-leaf factorized quadrature at
/// n_samples random configurations with spins drawn from the grid nodes.
/// Passes iff the max relative error and the field residual are both < tol.
CompatReport check_compatibility(const Kernel& kern, const VertexField& vf, int n_samples,
                                 std::uint64_t rng_seed, double tol);

/// Caches messages once and draws i.i.d. configurations; configuration i of a
/// bulk run uses seed master_seed + i.
class Sampler {
public:
    Sampler(const Kernel& kern, const VertexField& vf);

    Configuration sample(std::uint64_t seed) const;
    std::vector<Configuration> sample_many(int count, std::uint64_t master_seed) const;

    const MessageSet& message_set() const { return ms_; }

private:
    const Kernel& kern_;
    const VertexField& vf_;
    MessageSet ms_;
    std::vector<double> row1_;  // K(1, u_j)

    double draw_site(int level, std::int64_t rank, bool has_parent, double parent_spin,
                     double unit) const;
};

/// Top-down draw of a full configuration (root from its marginal, then each
/// child from density K(parent_spin, u) z(u, child)); deterministic given seed.
Configuration sample_configuration(const Kernel& kern, const VertexField& vf,
                                   std::uint64_t rng_seed);

/// Normalized single-site marginal; equals root_marginal at the root.
Field marginal_at(const Kernel& kern, const VertexField& vf, const VertexAddr& x);

}  // namespace gibbstree
