#include "quiverforge/quiver.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace quiverforge {

Quiver::Quiver(int num_vertices, std::vector<std::pair<int, int>> tail_head_pairs,
               std::vector<std::string> labels) {
    require(num_vertices >= 0, "quiver: negative vertex count");
    if (labels.empty()) {
        labels.reserve(num_vertices);
        for (int v = 0; v < num_vertices; ++v) labels.push_back("v" + std::to_string(v));
    }
    require(static_cast<int>(labels.size()) == num_vertices, "quiver: label count mismatch");
    labels_ = std::move(labels);
    out_.assign(num_vertices, {});
    in_.assign(num_vertices, {});
    edges_.reserve(tail_head_pairs.size());
    for (const auto& [t, h] : tail_head_pairs) {
        require(t >= 0 && t < num_vertices && h >= 0 && h < num_vertices,
                "quiver: edge endpoint out of range");
        int id = static_cast<int>(edges_.size());
        edges_.push_back(Edge{id, t, h});
        out_[t].push_back(id);
        in_[h].push_back(id);
    }
}

const Edge& Quiver::edge(int id) const {
    require(id >= 0 && id < num_edges(), "quiver: edge id out of range");
    return edges_[id];
}

const std::string& Quiver::label(int v) const {
    require(valid_vertex(v), "quiver: vertex out of range");
    return labels_[v];
}

const std::vector<int>& Quiver::out_edges(int v) const {
    require(valid_vertex(v), "quiver: vertex out of range");
    return out_[v];
}

const std::vector<int>& Quiver::in_edges(int v) const {
    require(valid_vertex(v), "quiver: vertex out of range");
    return in_[v];
}

bool Quiver::operator==(const Quiver& other) const {
    if (num_vertices() != other.num_vertices() || num_edges() != other.num_edges()) return false;
    for (int e = 0; e < num_edges(); ++e)
        if (edges_[e].tail != other.edges_[e].tail || edges_[e].head != other.edges_[e].head)
            return false;
    return true;
}

Quiver jordan_quiver() { return Quiver(1, {{0, 0}}); }

Quiver kronecker_quiver(int n) {
    require(n >= 1, "kronecker_quiver: need at least one edge");
    std::vector<std::pair<int, int>> edges(n, {0, 1});
    return Quiver(2, std::move(edges));
}

Quiver type_a_quiver(int m) {
    require(m >= 1, "type_a_quiver: need at least one vertex");
    std::vector<std::pair<int, int>> edges;
    for (int k = 1; k < m; ++k) edges.push_back({k, k - 1});
    return Quiver(m, std::move(edges));
}

Quiver opposite(const Quiver& q) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(q.num_edges());
    for (const Edge& e : q.edges()) edges.push_back({e.head, e.tail});
    return Quiver(q.num_vertices(), std::move(edges), q.labels());
}

bool is_indivisible(const DimensionVector& d) {
    long long g = 0;
    for (int x : d) g = std::gcd(g, static_cast<long long>(x));
    return g == 1;
}

long long euler_form(const Quiver& q, const DimensionVector& d, const DimensionVector& e) {
    require(static_cast<int>(d.size()) == q.num_vertices() &&
                static_cast<int>(e.size()) == q.num_vertices(),
            "euler_form: dimension vector length mismatch");
    long long acc = 0;
    for (int i = 0; i < q.num_vertices(); ++i)
        acc += static_cast<long long>(d[i]) * e[i];
    for (const Edge& a : q.edges())
        acc -= static_cast<long long>(d[a.tail]) * e[a.head];
    return acc;
}

Path::Path(QuiverPtr q, int base_vertex, std::vector<int> edges)
    : quiver_(std::move(q)), base_vertex_(base_vertex), edges_(std::move(edges)) {}

Path Path::trivial(QuiverPtr q, int vertex) {
    require(q != nullptr, "path: null quiver");
    require(q->valid_vertex(vertex), "path: trivial vertex out of range");
    return Path(std::move(q), vertex, {});
}

Path Path::from_edges(QuiverPtr q, std::vector<int> edge_ids) {
    require(q != nullptr, "path: null quiver");
    require(!edge_ids.empty(), "path: empty edge list; use Path::trivial");
    for (std::size_t n = 0; n + 1 < edge_ids.size(); ++n)
        require(q->tail(edge_ids[n]) == q->head(edge_ids[n + 1]),
                "path: consecutive edges do not compose");
    int base = q->tail(edge_ids.back());
    return Path(std::move(q), base, std::move(edge_ids));
}

int Path::head() const { return edges_.empty() ? base_vertex_ : quiver_->head(edges_.front()); }

int Path::tail() const { return edges_.empty() ? base_vertex_ : quiver_->tail(edges_.back()); }

Path Path::composed_with(const Path& other) const {
    require(*quiver_ == *other.quiver_, "path composition: different base quivers");
    require(other.head() == tail(), "path composition: endpoints do not match");
    if (is_trivial()) return other;
    if (other.is_trivial()) return *this;
    std::vector<int> edges = edges_;
    edges.insert(edges.end(), other.edges_.begin(), other.edges_.end());
    return Path(quiver_, other.base_vertex_, std::move(edges));
}

bool Path::operator==(const Path& other) const {
    if (edges_.empty() != other.edges_.empty()) return false;
    if (edges_.empty()) return base_vertex_ == other.base_vertex_;
    return edges_ == other.edges_;
}

bool Path::operator<(const Path& other) const {
    if (edges_.size() != other.edges_.size()) return edges_.size() < other.edges_.size();
    if (edges_ != other.edges_) return edges_ < other.edges_;
    int a = edges_.empty() ? base_vertex_ : 0;
    int b = other.edges_.empty() ? other.base_vertex_ : 0;
    return a < b;
}

std::vector<Path> enumerate_paths(const QuiverPtr& q, int from, int to, int max_len,
                                  long long cap) {
    require(q != nullptr, "enumerate_paths: null quiver");
    require(q->valid_vertex(from) && q->valid_vertex(to), "enumerate_paths: invalid vertex");
    require(max_len >= 0, "enumerate_paths: negative max_len");

    std::vector<Path> result;
    long long explored = 0;

    // Walk forward from `from`; `applied` holds edges in application order, so
    // the stored (head-to-tail) sequence is its reverse.
    std::vector<int> applied;
    auto emit = [&](int /*at*/) {
        std::vector<int> stored(applied.rbegin(), applied.rend());
        result.push_back(Path::from_edges(q, std::move(stored)));
    };
    auto dfs = [&](auto&& self, int at, int depth) -> void {
        if (++explored > cap)
            throw PreconditionError("enumerate_paths: path count exceeds cap " +
                                    std::to_string(cap));
        if (at == to && depth > 0) emit(at);
        if (depth == max_len) return;
        for (int e : q->out_edges(at)) {
            applied.push_back(e);
            self(self, q->head(e), depth + 1);
            applied.pop_back();
        }
    };
    if (from == to) result.push_back(Path::trivial(q, from));
    dfs(dfs, from, 0);
    std::sort(result.begin(), result.end());
    return result;
}

int TensorQuiverMap::vertex_index(int i, int j) const {
    require(factor1.valid_vertex(i) && factor2.valid_vertex(j),
            "tensor quiver: factor vertex out of range");
    return i * factor2.num_vertices() + j;
}

int TensorQuiverMap::first_factor_edge(int alpha, int j) const {
    require(alpha >= 0 && alpha < factor1.num_edges() && factor2.valid_vertex(j),
            "tensor quiver: (alpha, j) out of range");
    return alpha * factor2.num_vertices() + j;
}

int TensorQuiverMap::second_factor_edge(int i, int beta) const {
    require(factor1.valid_vertex(i) && beta >= 0 && beta < factor2.num_edges(),
            "tensor quiver: (i, beta) out of range");
    return factor1.num_edges() * factor2.num_vertices() + i * factor2.num_edges() + beta;
}

TensorQuiverMap tensor_quiver(const Quiver& q1, const Quiver& q2) {
    require(!q1.empty() && !q2.empty(), "tensor_quiver: empty factor");
    TensorQuiverMap map;
    map.factor1 = q1;
    map.factor2 = q2;

    const int n2 = q2.num_vertices();
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(q1.num_vertices()) * n2);
    for (int i = 0; i < q1.num_vertices(); ++i)
        for (int j = 0; j < n2; ++j) {
            map.vertex_pairs.push_back({i, j});
            labels.push_back("(" + q1.label(i) + "," + q2.label(j) + ")");
        }

    std::vector<std::pair<int, int>> edges;
    // (alpha, j): h = (h alpha, j), t = (t alpha, j)
    for (int alpha = 0; alpha < q1.num_edges(); ++alpha)
        for (int j = 0; j < n2; ++j) {
            edges.push_back({q1.tail(alpha) * n2 + j, q1.head(alpha) * n2 + j});
            map.edge_origins.push_back(TensorEdgeOrigin{1, alpha, j});
        }
    // (i, beta): h = (i, h beta), t = (i, t beta)
    for (int i = 0; i < q1.num_vertices(); ++i)
        for (int beta = 0; beta < q2.num_edges(); ++beta) {
            edges.push_back({i * n2 + q2.tail(beta), i * n2 + q2.head(beta)});
            map.edge_origins.push_back(TensorEdgeOrigin{2, beta, i});
        }

    map.product = share(Quiver(q1.num_vertices() * n2, std::move(edges), std::move(labels)));
    return map;
}

namespace {

Quiver build_from(const Quiver& src, const std::vector<int>& vertex_map, int new_vertex_count,
                  const std::vector<std::pair<int, int>>& extra_edges, std::vector<int>& edge_map,
                  std::vector<std::string> labels = {}) {
    std::vector<std::pair<int, int>> edges;
    edge_map.assign(src.num_edges(), -1);
    for (const Edge& e : src.edges()) {
        int t = vertex_map[e.tail];
        int h = vertex_map[e.head];
        if (t < 0 || h < 0) continue;
        edge_map[e.id] = static_cast<int>(edges.size());
        edges.push_back({t, h});
    }
    for (auto& th : extra_edges) edges.push_back(th);
    return Quiver(new_vertex_count, std::move(edges), std::move(labels));
}

}  // namespace

QuiverOpRecord collapse_vertices(const Quiver& q, const std::vector<std::vector<int>>& groups) {
    require(!q.empty(), "collapse_vertices: empty quiver");
    std::vector<int> owner(q.num_vertices(), -1);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        require(!groups[g].empty(), "collapse_vertices: empty group");
        for (int v : groups[g]) {
            require(q.valid_vertex(v), "collapse_vertices: vertex out of range");
            require(owner[v] == -1, "collapse_vertices: groups overlap");
            owner[v] = static_cast<int>(g);
        }
    }

    QuiverOpRecord rec;
    rec.kind = QuiverOpRecord::Kind::collapse_vertices;
    rec.source = q;
    rec.vertex_map.assign(q.num_vertices(), -1);

    // Result vertex order: one vertex per group (in group order), then the
    // untouched vertices in ascending source order.
    int next = 0;
    std::vector<std::string> labels;
    for (const auto& group : groups) {
        std::vector<int> sorted = group;
        std::sort(sorted.begin(), sorted.end());
        std::string label;
        for (int v : sorted) label += (label.empty() ? "" : "+") + q.label(v);
        labels.push_back(label);
        for (int v : sorted) rec.vertex_map[v] = next;
        rec.vertex_groups.push_back(sorted);
        ++next;
    }
    for (int v = 0; v < q.num_vertices(); ++v)
        if (rec.vertex_map[v] == -1) {
            rec.vertex_map[v] = next++;
            rec.vertex_groups.push_back({v});
            labels.push_back(q.label(v));
        }

    rec.result = build_from(q, rec.vertex_map, next, {}, rec.edge_map, std::move(labels));
    return rec;
}

QuiverOpRecord collapse_edges(const Quiver& q, const std::vector<int>& bundle) {
    require(!bundle.empty(), "collapse_edges: empty bundle");
    for (int e : bundle) require(e >= 0 && e < q.num_edges(), "collapse_edges: edge not found");
    const int h = q.head(bundle.front());
    const int t = q.tail(bundle.front());
    for (int e : bundle)
        require(q.head(e) == h && q.tail(e) == t, "collapse_edges: bundle edges not parallel");

    std::vector<bool> dropped(q.num_edges(), false);
    for (std::size_t k = 1; k < bundle.size(); ++k) {
        require(!dropped[bundle[k]] && bundle[k] != bundle.front(),
                "collapse_edges: duplicate edge in bundle");
        dropped[bundle[k]] = true;
    }

    QuiverOpRecord rec;
    rec.kind = QuiverOpRecord::Kind::collapse_edges;
    rec.source = q;
    rec.bundle = bundle;
    rec.vertex_map.resize(q.num_vertices());
    for (int v = 0; v < q.num_vertices(); ++v) rec.vertex_map[v] = v;
    rec.edge_map.assign(q.num_edges(), -1);

    std::vector<std::pair<int, int>> edges;
    for (const Edge& e : q.edges()) {
        if (dropped[e.id]) continue;
        rec.edge_map[e.id] = static_cast<int>(edges.size());
        edges.push_back({e.tail, e.head});
    }
    for (std::size_t k = 1; k < bundle.size(); ++k)
        rec.edge_map[bundle[k]] = rec.edge_map[bundle.front()];
    rec.result = Quiver(q.num_vertices(), std::move(edges), q.labels());
    return rec;
}

QuiverOpRecord clone_vertex(const Quiver& q, int v) {
    require(q.valid_vertex(v), "clone_vertex: vertex not found");
    QuiverOpRecord rec;
    rec.kind = QuiverOpRecord::Kind::clone_vertex;
    rec.source = q;
    rec.cloned_vertex = v;
    rec.clone_new_vertex = q.num_vertices();

    rec.vertex_map.resize(q.num_vertices());
    for (int u = 0; u < q.num_vertices(); ++u) rec.vertex_map[u] = u;
    rec.edge_map.resize(q.num_edges());
    for (int e = 0; e < q.num_edges(); ++e) rec.edge_map[e] = e;

    std::vector<std::pair<int, int>> edges;
    for (const Edge& e : q.edges()) edges.push_back({e.tail, e.head});
    const int c = rec.clone_new_vertex;
    for (const Edge& e : q.edges()) {
        if (e.tail != v && e.head != v) continue;
        int t = e.tail == v ? c : e.tail;
        int h = e.head == v ? c : e.head;
        rec.cloned_edges.push_back({static_cast<int>(edges.size()), e.id});
        edges.push_back({t, h});
    }
    std::vector<std::string> labels = q.labels();
    labels.push_back(q.label(v) + "'");
    rec.result = Quiver(q.num_vertices() + 1, std::move(edges), std::move(labels));
    return rec;
}

QuiverOpRecord delete_vertex(const Quiver& q, int v) {
    require(q.valid_vertex(v), "delete_vertex: vertex not found");
    QuiverOpRecord rec;
    rec.kind = QuiverOpRecord::Kind::delete_vertex;
    rec.source = q;
    rec.vertex_map.assign(q.num_vertices(), -1);
    std::vector<std::string> labels;
    int next = 0;
    for (int u = 0; u < q.num_vertices(); ++u)
        if (u != v) {
            rec.vertex_map[u] = next++;
            labels.push_back(q.label(u));
        }
    rec.result = build_from(q, rec.vertex_map, next, {}, rec.edge_map, std::move(labels));
    return rec;
}

QuiverOpRecord delete_edge(const Quiver& q, int e) {
    require(e >= 0 && e < q.num_edges(), "delete_edge: edge not found");
    QuiverOpRecord rec;
    rec.kind = QuiverOpRecord::Kind::delete_edge;
    rec.source = q;
    rec.vertex_map.resize(q.num_vertices());
    for (int v = 0; v < q.num_vertices(); ++v) rec.vertex_map[v] = v;
    rec.edge_map.assign(q.num_edges(), -1);
    std::vector<std::pair<int, int>> edges;
    for (const Edge& ed : q.edges()) {
        if (ed.id == e) continue;
        rec.edge_map[ed.id] = static_cast<int>(edges.size());
        edges.push_back({ed.tail, ed.head});
    }
    rec.result = Quiver(q.num_vertices(), std::move(edges), q.labels());
    return rec;
}

}  // namespace quiverforge
