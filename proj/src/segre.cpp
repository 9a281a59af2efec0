#include "quiverforge/segre.hpp"

#include <algorithm>
#include <cmath>

namespace quiverforge {

DiamondShape identify_diamond(const Quiver& q) {
    require(q.num_vertices() == 4, "diamond: expected exactly 4 vertices");
    int source = -1, sink = -1;
    std::vector<int> middles;
    for (int v = 0; v < 4; ++v) {
        bool has_in = !q.in_edges(v).empty();
        bool has_out = !q.out_edges(v).empty();
        if (has_out && !has_in) {
            require(source == -1, "diamond: two sources");
            source = v;
        } else if (has_in && !has_out) {
            require(sink == -1, "diamond: two sinks");
            sink = v;
        } else if (has_in && has_out) {
            middles.push_back(v);
        } else {
            throw PreconditionError("diamond: isolated vertex");
        }
    }
    require(source >= 0 && sink >= 0 && middles.size() == 2,
            "diamond: not a source/middle/middle/sink shape");

    auto edges_between = [&](int a, int b) {
        std::vector<int> out;
        for (int e : q.out_edges(a))
            if (q.head(e) == b) out.push_back(e);
        return out;
    };

    // Both labelings of the middles are structurally consistent (swapping
    // them swaps s and t); fix the one where "top" is the head of the
    // lowest-id edge out of the source. Tensor quivers list first-factor
    // edges first, so this recovers the factor order of the construction.
    DiamondShape shape;
    shape.source = source;
    shape.sink = sink;
    shape.top = q.head(q.out_edges(source).front());
    shape.bottom = shape.top == middles[0] ? middles[1] : middles[0];
    shape.x_edges = edges_between(source, shape.top);
    shape.y_edges = edges_between(shape.top, sink);
    shape.w_edges = edges_between(source, shape.bottom);
    shape.z_edges = edges_between(shape.bottom, sink);
    shape.n = static_cast<int>(shape.x_edges.size());
    shape.m = static_cast<int>(shape.y_edges.size());
    bool consistent = shape.n > 0 && shape.m > 0 &&
                      static_cast<int>(shape.w_edges.size()) == shape.m &&
                      static_cast<int>(shape.z_edges.size()) == shape.n &&
                      q.num_edges() == 2 * (shape.n + shape.m);
    require(consistent, "diamond: arm counts do not match a Q_n (x) Q_m tensor quiver");
    return shape;
}

DiamondInvariants diamond_invariants(const Representation& rep) {
    for (int d : rep.dims()) require(d == 1, "diamond_invariants: representation is not thin");
    DiamondShape shape = identify_diamond(*rep.quiver());

    auto arm = [&](const std::vector<int>& edges) {
        Eigen::VectorXcd v(edges.size());
        for (std::size_t k = 0; k < edges.size(); ++k) v(k) = rep.matrix(edges[k])(0, 0);
        return v;
    };
    Eigen::VectorXcd x = arm(shape.x_edges), y = arm(shape.y_edges);
    Eigen::VectorXcd w = arm(shape.w_edges), z = arm(shape.z_edges);

    DiamondInvariants inv;
    inv.n = shape.n;
    inv.m = shape.m;
    inv.s = x * y.transpose();  // s_{ij} = x_i y_j, n x m
    inv.t = w * z.transpose();  // t_{kl} = w_k z_l, m x n
    return inv;
}

namespace {

double max_two_by_two_minor(const Mat& a) {
    double worst = 0.0;
    for (int i1 = 0; i1 < a.rows(); ++i1)
        for (int i2 = i1 + 1; i2 < a.rows(); ++i2)
            for (int j1 = 0; j1 < a.cols(); ++j1)
                for (int j2 = j1 + 1; j2 < a.cols(); ++j2)
                    worst = std::max(worst,
                                     std::abs(a(i1, j1) * a(i2, j2) - a(i1, j2) * a(i2, j1)));
    return worst;
}

}  // namespace

double segre_quadric_residual(const DiamondInvariants& inv) {
    return std::max(max_two_by_two_minor(inv.s), max_two_by_two_minor(inv.t));
}

double diagonal_residual(const DiamondInvariants& inv) {
    require(inv.s.rows() == inv.t.cols() && inv.s.cols() == inv.t.rows(),
            "diagonal_residual: shape mismatch");
    double worst = 0.0;
    for (int i = 0; i < inv.s.rows(); ++i)
        for (int j = 0; j < inv.s.cols(); ++j)
            worst = std::max(worst, std::abs(inv.s(i, j) - inv.t(j, i)));
    return worst;
}

SegreMembership in_segre_image(const Representation& rep, double tol) {
    DiamondInvariants inv = diamond_invariants(rep);
    SegreMembership out;
    out.quadric_residual = segre_quadric_residual(inv);
    out.diagonal_residual = diagonal_residual(inv);

    // Pivot at the largest-magnitude entry of s.
    int pi = 0, pj = 0;
    double best = -1.0;
    for (int i = 0; i < inv.s.rows(); ++i)
        for (int j = 0; j < inv.s.cols(); ++j)
            if (std::abs(inv.s(i, j)) > best) {
                best = std::abs(inv.s(i, j));
                pi = i;
                pj = j;
            }
    require(best > 0.0, "in_segre_image: all invariants vanish (unstable input)");

    out.in_image = out.quadric_residual <= tol && out.diagonal_residual <= tol;
    // s = z w^T up to the residuals; normalize so that z_pi = s(pi,pj), w_pj = 1.
    out.z = inv.s.col(pj);
    out.w = (inv.s.row(pi) / inv.s(pi, pj)).transpose();
    return out;
}

}  // namespace quiverforge
