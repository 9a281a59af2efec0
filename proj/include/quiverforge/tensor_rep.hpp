#pragma once

#include "quiverforge/path_algebra.hpp"
#include "quiverforge/representation.hpp"

#include <memory>
#include <optional>

namespace quiverforge {

/// Representation of Q' (x) Q'' obtained by tensoring, together with its
/// factors and the commutation ideal it satisfies by construction.
struct TensorRepresentation {
    Representation rep;
    std::shared_ptr<const TensorQuiverMap> map;
    Representation factor1;
    Representation factor2;
    CommutationIdeal ideal;
};

/// Edge (a, j) carries phi_a (x) Id, edge (i, b) carries Id (x) psi_b; the
/// first factor indexes the slow Kronecker axis, so A (x) Id is block diagonal
/// and every commutation generator is satisfied entrywise exactly.
TensorRepresentation tensor(const Representation& a, const Representation& b);

/// Dual on the opposite quiver: edge a* carries -phi_a^T (transpose, not
/// conjugate transpose). Applying twice returns the original.
Representation dual(const Representation& rep);

/// g . phi = (g_{ha} phi_a g_{ta}^{-1}); one invertible matrix per vertex.
Representation apply_group_action(const Representation& rep, const std::vector<Mat>& g);

/// Restriction of scalars along a quiver operation: collapsed vertices carry
/// direct sums with block maps, collapsed edges the sum of the bundled maps,
/// cloned structure carries copies, deleted structure is dropped.
Representation restrict_along(const Representation& rep, const QuiverOpRecord& record);

/// Stability transport onto the tensor quiver:
/// sigma_(i,j) = sigma'_i sigma''_j, theta_(i,j) = theta'_i sigma''_j + theta''_j sigma'_i
/// (additive when sigma is 1). theta' is balanced against the product dims.
StabilityData transported_theta_tensor(const TensorQuiverMap& tq, const StabilityData& s1,
                                       const DimensionVector& d1, const StabilityData& s2,
                                       const DimensionVector& d2);

/// Stability transport along collapse/clone/delete. tau is the isotropy
/// constant required by the edge operations; it is the caller's responsibility
/// (see edge_isotropy_constant). Collapsing vertices requires equal stability
/// components within each group.
StabilityData transported_theta_op(const QuiverOpRecord& record, const StabilityData& s,
                                   const DimensionVector& d_source, double tau = 0.0);

/// Checks sum_{n,m} phi_n phi_m^* and sum_{n,m} phi_n^* phi_m against tau Id
/// and extracts tau if both are scalar to tolerance.
std::optional<double> edge_isotropy_constant(const Representation& rep,
                                             const std::vector<int>& bundle, double tol = 1e-10);

}  // namespace quiverforge
