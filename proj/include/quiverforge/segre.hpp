#pragma once

#include "quiverforge/representation.hpp"

#include <Eigen/Dense>

namespace quiverforge {

/// Structural identification of a thin Q_n (x) Q_m representation's quiver:
/// source (out-edges only), sink (in-edges only), and the two middle vertices.
/// Arm counts satisfy |source->top| = |bottom->sink| = n and
/// |top->sink| = |source->bottom| = m.
struct DiamondShape {
    int source = 0, top = 0, bottom = 0, sink = 0;
    std::vector<int> x_edges;  // source -> top, n of them
    std::vector<int> y_edges;  // top -> sink, m
    std::vector<int> w_edges;  // source -> bottom, m
    std::vector<int> z_edges;  // bottom -> sink, n
    int n = 0, m = 0;
};

DiamondShape identify_diamond(const Quiver& q);

/// Semi-invariant monomials of the diamond: s_{ij} = x_i y_j (n x m) and
/// t_{kl} = w_k z_l (m x n). Both are invariant under the diagonal torus
/// rescalings of the representation.
struct DiamondInvariants {
    Mat s;  // n x m
    Mat t;  // m x n
    int n = 0, m = 0;
};

DiamondInvariants diamond_invariants(const Representation& rep);

/// Max absolute 2x2 minor over s and t (the Segre quadrics).
double segre_quadric_residual(const DiamondInvariants& inv);

/// Max |s_{ij} - t_{ji}| (the diagonal relations cutting out the tensor image).
double diagonal_residual(const DiamondInvariants& inv);

struct SegreMembership {
    bool in_image = false;
    double quadric_residual = 0.0;
    double diagonal_residual = 0.0;
    /// Representative factors, recovered up to scalar from the invariants.
    Eigen::VectorXcd z;  // length n
    Eigen::VectorXcd w;  // length m
};

/// Membership in the image of the tensorization map: both residuals <= tol.
/// On success the factors are reconstructed from the largest-magnitude row and
/// column of s. All-zero invariants are rejected (unstable input).
SegreMembership in_segre_image(const Representation& rep, double tol = 1e-10);

}  // namespace quiverforge
