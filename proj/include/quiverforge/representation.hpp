#pragma once

#include "quiverforge/path_algebra.hpp"
#include "quiverforge/quiver.hpp"
#include "quiverforge/rational.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace quiverforge {

using Mat = Eigen::MatrixXcd;

/// Complex matrices attached to the edges of a quiver; the matrix of edge a
/// has shape d_{ha} x d_{ta}.
class Representation {
public:
    Representation() = default;  // empty; fill via make()
    static Representation make(QuiverPtr q, DimensionVector dims, std::vector<Mat> matrices);
    static Representation zero(QuiverPtr q, DimensionVector dims);

    const QuiverPtr& quiver() const { return quiver_; }
    const DimensionVector& dims() const { return dims_; }
    int dim(int v) const { return dims_[v]; }
    const Mat& matrix(int edge_id) const { return matrices_[edge_id]; }
    const std::vector<Mat>& matrices() const { return matrices_; }

    /// sqrt(sum of squared Frobenius norms) over all edges.
    double norm() const;

private:
    QuiverPtr quiver_;
    DimensionVector dims_;
    std::vector<Mat> matrices_;
};

/// Per-vertex stability data. sigma is carried for the bundle formulas but
/// fixed to 1 in the linear case; theta_prime is the balanced parameter.
struct StabilityData {
    std::vector<double> sigma;
    std::vector<double> theta;
    std::vector<double> theta_prime;
};

/// theta'_i = theta_i sum_j d_j - sum_j theta_j d_j, computed in exact
/// rational arithmetic so that theta'.d = 0 exactly.
std::vector<Rational> balance_theta_exact(const std::vector<Rational>& theta,
                                          const DimensionVector& d);
std::vector<double> balance_theta(const std::vector<double>& theta, const DimensionVector& d);

StabilityData make_stability(std::vector<double> theta, const DimensionVector& d,
                             std::vector<double> sigma = {});

/// Linear-case slope: sum_i theta_i d_i / sum_i d_i.
double slope(const DimensionVector& d, const std::vector<double>& theta);
Rational slope_exact(const DimensionVector& d, const std::vector<Rational>& theta);

/// phi_p = phi_{a_1} ... phi_{a_k}; the trivial path at i gives Id_{d_i}.
Mat evaluate_path(const Representation& rep, const Path& p);

struct RelationCheck {
    bool ok = true;
    std::vector<double> residuals;  // Frobenius norm of nu_r per relation
};

/// nu_r = sum c_p phi_p per relation; ok iff every norm <= tol.
RelationCheck satisfies_relations(const Representation& rep, const std::vector<Relation>& rels,
                                  double tol = 1e-10);

/// Block-diagonal direct sum; dimension vectors add.
Representation direct_sum(const Representation& a, const Representation& b);

/// Per-vertex column bases of candidate subspaces F_i in C^{d_i}. A matrix
/// with zero columns encodes the zero subspace.
struct SubspaceFamily {
    std::vector<Mat> basis;
};

/// True iff phi_a(F_{ta}) lies in span(F_{ha}) for every edge, measured by the
/// QR projection residual. Throws on rank-deficient basis matrices.
bool is_subrepresentation(const Representation& rep, const SubspaceFamily& f, double tol = 1e-10);

enum class ThinVerdict { stable, semistable_not_stable, unstable };

struct ThinStabilityResult {
    ThinVerdict verdict;
    /// Violating subset for unstable, an equalizing one for strictly
    /// semistable, empty for stable.
    std::vector<int> witness;
    double witness_slope = 0.0;
    double total_slope = 0.0;
};

const char* to_string(ThinVerdict v);

/// Exact stability classification for thin representations (all d_i <= 1).
/// Subrepresentations of a thin representation are the arrow-closed subsets of
/// the support, so the check enumerates those; slope ties are decided in
/// exact rational arithmetic. Support size is capped at 24 vertices.
ThinStabilityResult thin_stability(const Representation& rep, const StabilityData& s);

}  // namespace quiverforge
