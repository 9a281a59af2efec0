#include "quiverforge/representation.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace quiverforge {

Representation Representation::make(QuiverPtr q, DimensionVector dims, std::vector<Mat> matrices) {
    require(q != nullptr, "representation: null quiver");
    require(static_cast<int>(dims.size()) == q->num_vertices(),
            "representation: dimension vector length mismatch");
    for (int d : dims) require(d >= 0, "representation: negative dimension");
    require(static_cast<int>(matrices.size()) == q->num_edges(),
            "representation: one matrix per edge required");
    for (const Edge& e : q->edges()) {
        const Mat& m = matrices[e.id];
        require(m.rows() == dims[e.head] && m.cols() == dims[e.tail],
                "representation: matrix shape mismatch on edge " + std::to_string(e.id));
        require(m.allFinite(), "representation: non-finite entry on edge " + std::to_string(e.id));
    }
    Representation rep;
    rep.quiver_ = std::move(q);
    rep.dims_ = std::move(dims);
    rep.matrices_ = std::move(matrices);
    return rep;
}

Representation Representation::zero(QuiverPtr q, DimensionVector dims) {
    require(q != nullptr, "representation: null quiver");
    std::vector<Mat> mats;
    mats.reserve(q->num_edges());
    for (const Edge& e : q->edges()) mats.push_back(Mat::Zero(dims[e.head], dims[e.tail]));
    return make(std::move(q), std::move(dims), std::move(mats));
}

double Representation::norm() const {
    double acc = 0.0;
    for (const Mat& m : matrices_) acc += m.squaredNorm();
    return std::sqrt(acc);
}

std::vector<Rational> balance_theta_exact(const std::vector<Rational>& theta,
                                          const DimensionVector& d) {
    require(theta.size() == d.size(), "balance_theta: length mismatch");
    BigInt total = 0;
    for (int di : d) total += di;
    require(total > 0, "balance_theta: zero dimension vector");
    Rational weighted = 0;
    for (std::size_t i = 0; i < d.size(); ++i) weighted += theta[i] * d[i];
    std::vector<Rational> out(theta.size());
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = theta[i] * Rational(total) - weighted;
    return out;
}

std::vector<double> balance_theta(const std::vector<double>& theta, const DimensionVector& d) {
    std::vector<Rational> exact(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) exact[i] = rational_from_double(theta[i]);
    std::vector<Rational> balanced = balance_theta_exact(exact, d);
    std::vector<double> out(theta.size());
    for (std::size_t i = 0; i < balanced.size(); ++i)
        out[i] = static_cast<double>(balanced[i]);
    return out;
}

StabilityData make_stability(std::vector<double> theta, const DimensionVector& d,
                             std::vector<double> sigma) {
    require(theta.size() == d.size(), "stability: theta length mismatch");
    if (sigma.empty()) sigma.assign(d.size(), 1.0);
    require(sigma.size() == d.size(), "stability: sigma length mismatch");
    for (double s : sigma) require(s > 0.0, "stability: sigma must be positive");
    StabilityData out;
    out.theta_prime = balance_theta(theta, d);
    out.theta = std::move(theta);
    out.sigma = std::move(sigma);
    return out;
}

double slope(const DimensionVector& d, const std::vector<double>& theta) {
    require(theta.size() == d.size(), "slope: length mismatch");
    long long total = 0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        total += d[i];
        weighted += theta[i] * d[i];
    }
    require(total > 0, "slope: zero dimension vector");
    return weighted / static_cast<double>(total);
}

Rational slope_exact(const DimensionVector& d, const std::vector<Rational>& theta) {
    require(theta.size() == d.size(), "slope: length mismatch");
    BigInt total = 0;
    Rational weighted = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        total += d[i];
        weighted += theta[i] * d[i];
    }
    require(total > 0, "slope: zero dimension vector");
    return weighted / Rational(total);
}

Mat evaluate_path(const Representation& rep, const Path& p) {
    require(*p.quiver() == *rep.quiver(), "evaluate_path: foreign path");
    if (p.is_trivial()) return Mat::Identity(rep.dim(p.head()), rep.dim(p.head()));
    // edges() is head-to-tail, so the product phi_{a_1} ... phi_{a_k} reads in
    // storage order.
    Mat acc = rep.matrix(p.edges().front());
    for (std::size_t k = 1; k < p.edges().size(); ++k) acc = acc * rep.matrix(p.edges()[k]);
    return acc;
}

RelationCheck satisfies_relations(const Representation& rep, const std::vector<Relation>& rels,
                                  double tol) {
    RelationCheck check;
    check.residuals.reserve(rels.size());
    for (const Relation& r : rels) {
        require(*r.quiver() == *rep.quiver(), "satisfies_relations: relation on foreign quiver");
        Mat acc = Mat::Zero(rep.dim(r.head()), rep.dim(r.tail()));
        for (const Relation::Term& t : r.terms()) acc += t.coeff * evaluate_path(rep, t.path);
        double res = acc.norm();
        check.residuals.push_back(res);
        if (!(res <= tol)) check.ok = false;
    }
    return check;
}

Representation direct_sum(const Representation& a, const Representation& b) {
    require(*a.quiver() == *b.quiver(), "direct_sum: quiver mismatch");
    DimensionVector dims(a.dims().size());
    for (std::size_t i = 0; i < dims.size(); ++i) dims[i] = a.dims()[i] + b.dims()[i];
    std::vector<Mat> mats;
    const Quiver& q = *a.quiver();
    mats.reserve(q.num_edges());
    for (const Edge& e : q.edges()) {
        Mat m = Mat::Zero(dims[e.head], dims[e.tail]);
        m.topLeftCorner(a.dim(e.head), a.dim(e.tail)) = a.matrix(e.id);
        m.bottomRightCorner(b.dim(e.head), b.dim(e.tail)) = b.matrix(e.id);
        mats.push_back(std::move(m));
    }
    return Representation::make(a.quiver(), std::move(dims), std::move(mats));
}

namespace {

/// Orthonormal column basis, or an empty matrix for the zero subspace.
/// Throws if the given columns are linearly dependent within tolerance.
Mat orthonormal_basis(const Mat& basis, double tol) {
    if (basis.cols() == 0) return Mat(basis.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(basis, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    require(sv(sv.size() - 1) > tol * std::max(1.0, sv(0)),
            "is_subrepresentation: rank-deficient basis matrix");
    return svd.matrixU();
}

}  // namespace

bool is_subrepresentation(const Representation& rep, const SubspaceFamily& f, double tol) {
    require(f.basis.size() == rep.dims().size(), "is_subrepresentation: family length mismatch");
    std::vector<Mat> ortho;
    ortho.reserve(f.basis.size());
    for (std::size_t v = 0; v < f.basis.size(); ++v) {
        require(f.basis[v].rows() == rep.dim(static_cast<int>(v)),
                "is_subrepresentation: basis row count mismatch");
        require(f.basis[v].cols() <= f.basis[v].rows(),
                "is_subrepresentation: more basis columns than ambient dimension");
        ortho.push_back(orthonormal_basis(f.basis[v], tol));
    }
    for (const Edge& e : rep.quiver()->edges()) {
        if (ortho[e.tail].cols() == 0) continue;
        Mat image = rep.matrix(e.id) * ortho[e.tail];
        Mat residual = image - ortho[e.head] * (ortho[e.head].adjoint() * image);
        if (residual.norm() > tol * std::max(1.0, image.norm())) return false;
    }
    return true;
}

const char* to_string(ThinVerdict v) {
    switch (v) {
        case ThinVerdict::stable: return "stable";
        case ThinVerdict::semistable_not_stable: return "semistable_not_stable";
        case ThinVerdict::unstable: return "unstable";
    }
    return "?";
}

ThinStabilityResult thin_stability(const Representation& rep, const StabilityData& s) {
    const Quiver& q = *rep.quiver();
    require(s.theta.size() == rep.dims().size(), "thin_stability: theta length mismatch");
    std::vector<int> support;
    for (int v = 0; v < q.num_vertices(); ++v) {
        require(rep.dim(v) >= 0 && rep.dim(v) <= 1, "thin_stability: non-thin representation");
        if (rep.dim(v) == 1) support.push_back(v);
    }
    require(!support.empty(), "thin_stability: zero representation");
    require(support.size() <= 24, "thin_stability: support larger than 24 vertices");

    std::vector<Rational> theta(s.theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = rational_from_double(s.theta[i]);

    std::vector<int> pos(q.num_vertices(), -1);
    for (std::size_t k = 0; k < support.size(); ++k) pos[support[k]] = static_cast<int>(k);

    // Arrows that constrain closure: nonzero 1x1 map between support vertices.
    std::vector<std::pair<int, int>> arrows;  // (tail pos, head pos)
    for (const Edge& e : q.edges()) {
        if (pos[e.tail] < 0 || pos[e.head] < 0) continue;
        if (rep.matrix(e.id)(0, 0) != Complex(0.0, 0.0))
            arrows.push_back({pos[e.tail], pos[e.head]});
    }

    const Rational total_slope = slope_exact(rep.dims(), theta);
    ThinStabilityResult out;
    out.verdict = ThinVerdict::stable;
    out.total_slope = static_cast<double>(total_slope);

    const unsigned k = static_cast<unsigned>(support.size());
    std::optional<Rational> worst;
    std::vector<int> worst_subset;
    for (unsigned long long mask = 1; mask + 1 < (1ULL << k); ++mask) {
        bool closed = true;
        for (const auto& [t, h] : arrows)
            if ((mask >> t & 1ULL) && !(mask >> h & 1ULL)) {
                closed = false;
                break;
            }
        if (!closed) continue;
        DimensionVector sub(q.num_vertices(), 0);
        std::vector<int> members;
        for (unsigned b = 0; b < k; ++b)
            if (mask >> b & 1ULL) {
                sub[support[b]] = 1;
                members.push_back(support[b]);
            }
        Rational mu = slope_exact(sub, theta);
        if (mu >= total_slope && (!worst || mu > *worst)) {
            worst = mu;
            worst_subset = members;
        }
    }
    if (worst) {
        out.witness = worst_subset;
        out.witness_slope = static_cast<double>(*worst);
        out.verdict =
            *worst > total_slope ? ThinVerdict::unstable : ThinVerdict::semistable_not_stable;
    }
    return out;
}

}  // namespace quiverforge
