#pragma once

#include <span>
#include <string>
#include <vector>

#include "gibbstree/field.hpp"
#include "gibbstree/kernel.hpp"
#include "gibbstree/tree.hpp"

namespace gibbstree {

enum class Provenance { Art, Bg, Zachary, Constant, Manual };
std::string to_string(Provenance p);

/// Assignment of a boundary Field to every vertex of a depth-limited rooted
/// tree, stored per level in lexicographic rank order. Every assigned Field
/// vanishes at t = 0 (the shared normalization point).
struct VertexField {
    int k = 2;
    int depth = 0;
    TreeMode mode = TreeMode::Half;
    Provenance provenance = Provenance::Manual;
    std::vector<std::vector<Field>> levels;  // levels[l][rank]

    const Field& at(const VertexAddr& addr) const;
    Field& at(const VertexAddr& addr);

    /// The same assignment truncated to a smaller depth.
    VertexField restricted(int new_depth) const;

    std::int64_t vertex_count() const;
};

/// Level-homogeneous materialization: one Field per level (or a single Field
/// on every vertex).
VertexField field_to_vertexfield(std::span<const Field> levels_by_depth, int k, int depth,
                                 TreeMode mode, Provenance prov);
VertexField field_to_vertexfield(const Field& everywhere, int k, int depth, TreeMode mode,
                                 Provenance prov = Provenance::Constant);

struct ResidualReport {
    double max_res = 0.0;
    VertexAddr worst;
};

/// Defect of the vertex field in the consistency equation
///   h(.,x) = sum_{y in S(x)} A h(.,y)
/// over all vertices above the boundary level (leaves carry boundary data).
ResidualReport residual(const Kernel& kern, const VertexField& vf);

/// Order-lifting construction: extend a solution on the order-k0 tree to order
/// k > k0 by assigning the free field (h = 0) on all vertices outside the
/// embedded subtree (addresses over the digit alphabet {0..k0-1}). Requires the
/// zero-mean condition, which makes the free field a solution at every order.
VertexField art_lift(const Kernel& kern, const VertexField& f_mu, int k, int depth,
                     double fp_tol = 1e-8);

/// Path-gluing construction: boundary at depth n is h on vertices left of the
/// path, eta on the right, and `seed` at the path vertex; the interior is
/// filled by the backward recursion. h and eta must be fixed points of kA
/// within fp_tol; seed must lie strictly inside the (h_min, h_max) band.
VertexField bg_field(const Kernel& kern, int k, const Field& h, const Field& eta, const Path& p,
                     int n, const Field& seed, double fp_tol = 1e-8);

struct SeedSensitivityRow {
    int level = 0;
    double sup_diff = 0.0;
    double bound = 0.0;  // (alpha_hat + margin)^{n - level} * sup_diff at level n
    bool within = true;
};

/// Run the backward recursion for two seeds and tabulate the per-level
/// sup-difference at the path vertices against the geometric bound.
std::vector<SeedSensitivityRow> bg_seed_sensitivity(const Kernel& kern, int k, const Field& h,
                                                    const Field& eta, const Path& p, int n,
                                                    const Field& seed_a, const Field& seed_b,
                                                    double alpha_hat, double margin = 0.05,
                                                    double fp_tol = 1e-8);

/// Limit of the path-vertex field at depth m as the boundary recedes
/// (boundary depth n -> infinity); seed-independent under contraction. Uses
/// the path-reduced recursion: off-path subtrees reproduce h or eta, so only
/// the path chain needs recomputation.
Field bg_limit_field(const Kernel& kern, int k, const Field& h, const Field& eta, double r,
                     int depth_m, double tol, double fp_tol = 1e-8);

struct ZacharyResult {
    std::vector<Field> zeta;  // zeta[0..N]; zeta[n] is the level-n field
    std::vector<double> level_residuals;  // sup |zeta[n] - kA(zeta[n+1])|
    std::vector<double> shifts;           // constant re-representations applied per level
    bool completed = false;
    int failed_level = -1;  // first level whose preimage was unreachable, or -1
    std::string message;
};

/// Backward level sequence: zeta_{n} = kA(zeta_{n+1}) starting from zeta_0.
/// Each level is band-checked against (h_min, h_max); failure to invert or a
/// band exit aborts with the partial sequence and diagnostics.
ZacharyResult zachary_levels(const Kernel& kern, int k, const Field& zeta0, int N, double tol);

}  // namespace gibbstree
