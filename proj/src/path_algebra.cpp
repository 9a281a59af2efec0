#include "quiverforge/path_algebra.hpp"

#include <algorithm>
#include <set>

namespace quiverforge {

namespace {
constexpr double kCoeffZero = 0.0;  // exact pruning; inputs decide their own precision
}

Relation Relation::make(std::vector<Term> terms) {
    require(!terms.empty(), "relation: empty term list");
    const Path& first = terms.front().path;
    for (const Term& t : terms) {
        require(*t.path.quiver() == *first.quiver(), "relation: mixed quivers");
        require(t.path.length() >= 2, "relation: paths must have length >= 2");
        require(t.path.head() == first.head() && t.path.tail() == first.tail(),
                "relation: paths not parallel");
    }
    return Relation(std::move(terms));
}

PathAlgebraElement::PathAlgebraElement(QuiverPtr q) : quiver_(std::move(q)) {
    require(quiver_ != nullptr, "path algebra: null quiver");
}

PathAlgebraElement PathAlgebraElement::from_path(Path p, Complex coeff) {
    PathAlgebraElement x(p.quiver());
    x.add_term(p, coeff);
    return x;
}

PathAlgebraElement PathAlgebraElement::unit(QuiverPtr q) {
    PathAlgebraElement x(q);
    for (int i = 0; i < q->num_vertices(); ++i) x.add_term(Path::trivial(q, i), 1.0);
    return x;
}

PathAlgebraElement& PathAlgebraElement::add_term(const Path& p, Complex c) {
    require(*p.quiver() == *quiver_, "path algebra: foreign path");
    auto it = terms_.find(p);
    if (it == terms_.end()) {
        if (c != kCoeffZero) terms_.emplace(p, c);
    } else {
        it->second += c;
        if (it->second == kCoeffZero) terms_.erase(it);
    }
    return *this;
}

PathAlgebraElement multiply(const PathAlgebraElement& x, const PathAlgebraElement& y) {
    require(*x.quiver() == *y.quiver(), "multiply: mixed quivers");
    PathAlgebraElement r(x.quiver());
    for (const auto& [p, cp] : x.terms())
        for (const auto& [q, cq] : y.terms()) {
            if (q.head() != p.tail()) continue;  // m_p m_q = 0 unless hq = tp
            r.add_term(p.composed_with(q), cp * cq);
        }
    return r;
}

CommutationIdeal commutation_generators(const TensorQuiverMap& tq) {
    CommutationIdeal ideal;
    ideal.product = tq.product;
    const Quiver& q1 = tq.factor1;
    const Quiver& q2 = tq.factor2;
    for (int alpha = 0; alpha < q1.num_edges(); ++alpha)
        for (int beta = 0; beta < q2.num_edges(); ++beta) {
            // (h a, b)(a, t b): first-factor edge acts first.
            Path normal = Path::from_edges(
                tq.product, {tq.second_factor_edge(q1.head(alpha), beta),
                             tq.first_factor_edge(alpha, q2.tail(beta))});
            // (a, h b)(t a, b): second-factor edge acts first.
            Path other = Path::from_edges(
                tq.product, {tq.first_factor_edge(alpha, q2.head(beta)),
                             tq.second_factor_edge(q1.tail(alpha), beta)});
            ideal.pairs.push_back({normal, other});
            ideal.relations.push_back(Relation::make(
                {Relation::Term{1.0, normal}, Relation::Term{-1.0, other}}));
        }
    return ideal;
}

Path normal_form(const Path& p, const TensorQuiverMap& tq) {
    require(*p.quiver() == *tq.product, "normal_form: path not in tensor quiver");
    if (p.is_trivial()) return p;

    std::vector<int> edges = p.edges();  // stored head-to-tail; back() acts first
    const auto& origins = tq.edge_origins;
    const Quiver& q1 = tq.factor1;
    const Quiver& q2 = tq.factor2;

    // Rewrite (a, h b)(t a, b) -> (h a, b)(a, t b): a first-factor edge acting
    // right after a second-factor edge swaps past it. Termination: each swap
    // removes one inversion (first-factor edge stored left of a second-factor
    // edge).
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
            const TensorEdgeOrigin& later = origins[edges[k]];
            const TensorEdgeOrigin& earlier = origins[edges[k + 1]];
            if (later.factor == 1 && earlier.factor == 2) {
                int alpha = later.factor_edge;
                int beta = earlier.factor_edge;
                edges[k] = tq.second_factor_edge(q1.head(alpha), beta);
                edges[k + 1] = tq.first_factor_edge(alpha, q2.tail(beta));
                changed = true;
            }
        }
    }
    return Path::from_edges(p.quiver(), std::move(edges));
}

long long count_paths_mod_ideal(const TensorQuiverMap& tq, std::pair<int, int> from,
                                std::pair<int, int> to, int max_len, long long cap) {
    int u = tq.vertex_index(from.first, from.second);
    int v = tq.vertex_index(to.first, to.second);
    std::vector<Path> paths = enumerate_paths(tq.product, u, v, max_len, cap);
    std::set<Path> normal_forms;
    for (const Path& p : paths) normal_forms.insert(normal_form(p, tq));
    return static_cast<long long>(normal_forms.size());
}

}  // namespace quiverforge
