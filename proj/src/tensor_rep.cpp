#include "quiverforge/tensor_rep.hpp"

#include <Eigen/LU>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>

namespace quiverforge {

TensorRepresentation tensor(const Representation& a, const Representation& b) {
    TensorRepresentation out;
    auto map = std::make_shared<TensorQuiverMap>(tensor_quiver(*a.quiver(), *b.quiver()));

    const int n2 = map->factor2.num_vertices();
    DimensionVector dims(map->product->num_vertices());
    for (int i = 0; i < map->factor1.num_vertices(); ++i)
        for (int j = 0; j < n2; ++j) dims[i * n2 + j] = a.dim(i) * b.dim(j);

    std::vector<Mat> mats(map->product->num_edges());
    for (int e = 0; e < map->product->num_edges(); ++e) {
        const TensorEdgeOrigin& origin = map->edge_origins[e];
        if (origin.factor == 1) {
            int dj = b.dim(origin.other_vertex);
            mats[e] = Eigen::kroneckerProduct(a.matrix(origin.factor_edge),
                                              Mat::Identity(dj, dj));
        } else {
            int di = a.dim(origin.other_vertex);
            mats[e] = Eigen::kroneckerProduct(Mat::Identity(di, di),
                                              b.matrix(origin.factor_edge));
        }
    }

    out.rep = Representation::make(map->product, std::move(dims), std::move(mats));
    out.factor1 = a;
    out.factor2 = b;
    out.ideal = commutation_generators(*map);
    out.map = std::move(map);
    return out;
}

Representation dual(const Representation& rep) {
    QuiverPtr op = share(opposite(*rep.quiver()));
    std::vector<Mat> mats;
    mats.reserve(rep.matrices().size());
    for (const Mat& m : rep.matrices()) mats.push_back(-m.transpose());
    return Representation::make(std::move(op), rep.dims(), std::move(mats));
}

Representation apply_group_action(const Representation& rep, const std::vector<Mat>& g) {
    require(static_cast<int>(g.size()) == rep.quiver()->num_vertices(),
            "apply_group_action: one matrix per vertex required");
    std::vector<Mat> inv(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
        require(g[v].rows() == rep.dim(static_cast<int>(v)) && g[v].cols() == g[v].rows(),
                "apply_group_action: group element shape mismatch");
        if (g[v].rows() == 0) {
            inv[v] = g[v];
            continue;
        }
        Eigen::FullPivLU<Mat> lu(g[v]);
        require(lu.isInvertible(), "apply_group_action: singular group element");
        inv[v] = lu.inverse();
    }
    std::vector<Mat> mats;
    mats.reserve(rep.matrices().size());
    for (const Edge& e : rep.quiver()->edges())
        mats.push_back(g[e.head] * rep.matrix(e.id) * inv[e.tail]);
    return Representation::make(rep.quiver(), rep.dims(), std::move(mats));
}

Representation restrict_along(const Representation& rep, const QuiverOpRecord& record) {
    require(*rep.quiver() == record.source, "restrict_along: representation/record mismatch");
    const Quiver& result_q = record.result;

    // Result dimensions and, for merged vertices, the block offset of each
    // source vertex inside the direct sum.
    DimensionVector dims(result_q.num_vertices(), 0);
    std::vector<int> offset(rep.dims().size(), 0);
    if (record.kind == QuiverOpRecord::Kind::collapse_vertices) {
        for (std::size_t rv = 0; rv < record.vertex_groups.size(); ++rv) {
            int acc = 0;
            for (int v : record.vertex_groups[rv]) {
                offset[v] = acc;
                acc += rep.dim(v);
            }
            dims[rv] = acc;
        }
    } else {
        for (std::size_t v = 0; v < rep.dims().size(); ++v)
            if (record.vertex_map[v] >= 0) dims[record.vertex_map[v]] = rep.dim(static_cast<int>(v));
        if (record.kind == QuiverOpRecord::Kind::clone_vertex)
            dims[record.clone_new_vertex] = rep.dim(record.cloned_vertex);
    }

    std::vector<Mat> mats(result_q.num_edges());
    for (const Edge& e : result_q.edges())
        mats[e.id] = Mat::Zero(dims[e.head], dims[e.tail]);

    for (const Edge& e : rep.quiver()->edges()) {
        int re = record.edge_map[e.id];
        if (re < 0) continue;
        const Mat& m = rep.matrix(e.id);
        mats[re].block(offset[e.head], offset[e.tail], m.rows(), m.cols()) += m;
    }
    for (const auto& [re, se] : record.cloned_edges) mats[re] = rep.matrix(se);
    return Representation::make(share(result_q), std::move(dims), std::move(mats));
}

StabilityData transported_theta_tensor(const TensorQuiverMap& tq, const StabilityData& s1,
                                       const DimensionVector& d1, const StabilityData& s2,
                                       const DimensionVector& d2) {
    const int n1 = tq.factor1.num_vertices();
    const int n2 = tq.factor2.num_vertices();
    require(static_cast<int>(s1.theta.size()) == n1 && static_cast<int>(s2.theta.size()) == n2,
            "transported_theta: factor stability length mismatch");
    require(static_cast<int>(d1.size()) == n1 && static_cast<int>(d2.size()) == n2,
            "transported_theta: factor dimension length mismatch");
    std::vector<double> theta(n1 * n2);
    std::vector<double> sigma(n1 * n2);
    DimensionVector dims(n1 * n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            theta[i * n2 + j] = s1.theta[i] * s2.sigma[j] + s2.theta[j] * s1.sigma[i];
            sigma[i * n2 + j] = s1.sigma[i] * s2.sigma[j];
            dims[i * n2 + j] = d1[i] * d2[j];
        }
    return make_stability(std::move(theta), dims, std::move(sigma));
}

StabilityData transported_theta_op(const QuiverOpRecord& record, const StabilityData& s,
                                   const DimensionVector& d_source, double tau) {
    using Kind = QuiverOpRecord::Kind;
    const int nv = record.result.num_vertices();
    std::vector<double> theta(nv, 0.0), sigma(nv, 1.0);

    if (record.kind == Kind::collapse_vertices) {
        for (std::size_t rv = 0; rv < record.vertex_groups.size(); ++rv) {
            const auto& group = record.vertex_groups[rv];
            for (int v : group) {
                require(s.theta[v] == s.theta[group.front()] &&
                            s.sigma[v] == s.sigma[group.front()],
                        "transported_theta_op: collapsed vertices carry unequal parameters");
            }
            theta[rv] = s.theta[group.front()];
            sigma[rv] = s.sigma[group.front()];
        }
    } else {
        for (std::size_t v = 0; v < s.theta.size(); ++v) {
            int rv = record.vertex_map[v];
            if (rv < 0) continue;
            theta[rv] = s.theta[v];
            sigma[rv] = s.sigma[v];
        }
        if (record.kind == Kind::clone_vertex) {
            theta[record.clone_new_vertex] = s.theta[record.cloned_vertex];
            sigma[record.clone_new_vertex] = s.sigma[record.cloned_vertex];
        }
        if (record.kind == Kind::collapse_edges) {
            int h = record.source.head(record.bundle.front());
            int t = record.source.tail(record.bundle.front());
            theta[record.vertex_map[h]] -= tau;
            theta[record.vertex_map[t]] += tau;
        }
        if (record.kind == Kind::delete_edge) {
            // Mirror image of cloning: the deleted edge's contribution moves
            // back into theta.
            int deleted = -1;
            for (std::size_t e = 0; e < record.edge_map.size(); ++e)
                if (record.edge_map[e] < 0) deleted = static_cast<int>(e);
            theta[record.vertex_map[record.source.head(deleted)]] += tau;
            theta[record.vertex_map[record.source.tail(deleted)]] -= tau;
        }
    }

    DimensionVector dims(nv, 0);
    if (record.kind == Kind::collapse_vertices) {
        for (std::size_t rv = 0; rv < record.vertex_groups.size(); ++rv)
            for (int v : record.vertex_groups[rv]) dims[rv] += d_source[v];
    } else {
        for (std::size_t v = 0; v < d_source.size(); ++v)
            if (record.vertex_map[v] >= 0) dims[record.vertex_map[v]] = d_source[v];
        if (record.kind == Kind::clone_vertex)
            dims[record.clone_new_vertex] = d_source[record.cloned_vertex];
    }
    return make_stability(std::move(theta), dims, std::move(sigma));
}

std::optional<double> edge_isotropy_constant(const Representation& rep,
                                             const std::vector<int>& bundle, double tol) {
    require(!bundle.empty(), "edge_isotropy_constant: empty bundle");
    const Quiver& q = *rep.quiver();
    int h = q.head(bundle.front());
    int t = q.tail(bundle.front());
    for (int e : bundle)
        require(q.head(e) == h && q.tail(e) == t, "edge_isotropy_constant: edges not parallel");

    Mat sum_head = Mat::Zero(rep.dim(h), rep.dim(h));
    Mat sum_tail = Mat::Zero(rep.dim(t), rep.dim(t));
    for (int n : bundle)
        for (int m : bundle) {
            sum_head += rep.matrix(n) * rep.matrix(m).adjoint();
            sum_tail += rep.matrix(n).adjoint() * rep.matrix(m);
        }
    if (rep.dim(h) == 0 || rep.dim(t) == 0) return std::nullopt;

    double tau = sum_head.trace().real() / rep.dim(h);
    double scale = std::max({1.0, sum_head.norm(), sum_tail.norm()});
    Mat rh = sum_head - tau * Mat::Identity(rep.dim(h), rep.dim(h));
    Mat rt = sum_tail - tau * Mat::Identity(rep.dim(t), rep.dim(t));
    if (rh.norm() > tol * scale || rt.norm() > tol * scale) return std::nullopt;
    if (std::abs(sum_head.trace().imag()) > tol * scale) return std::nullopt;
    return tau;
}

}  // namespace quiverforge
