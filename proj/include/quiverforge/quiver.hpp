#pragma once

#include "quiverforge/errors.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace quiverforge {

struct Edge {
    int id = 0;
    int tail = 0;
    int head = 0;
};

/// Finite directed multigraph. Vertices and edges are dense 0-based indices;
/// labels are display-only. Loops and parallel edges are first-class.
class Quiver {
public:
    Quiver() = default;
    Quiver(int num_vertices, std::vector<std::pair<int, int>> tail_head_pairs,
           std::vector<std::string> labels = {});

    int num_vertices() const { return static_cast<int>(labels_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    bool empty() const { return num_vertices() == 0; }

    const Edge& edge(int id) const;
    const std::vector<Edge>& edges() const { return edges_; }
    int head(int edge_id) const { return edge(edge_id).head; }
    int tail(int edge_id) const { return edge(edge_id).tail; }

    const std::string& label(int v) const;
    const std::vector<std::string>& labels() const { return labels_; }

    /// Edge ids leaving / entering a vertex, ascending.
    const std::vector<int>& out_edges(int v) const;
    const std::vector<int>& in_edges(int v) const;

    bool valid_vertex(int v) const { return v >= 0 && v < num_vertices(); }

    bool operator==(const Quiver& other) const;

private:
    std::vector<std::string> labels_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
};

using QuiverPtr = std::shared_ptr<const Quiver>;

inline QuiverPtr share(Quiver q) { return std::make_shared<const Quiver>(std::move(q)); }

/// One vertex, one loop.
Quiver jordan_quiver();
/// Two vertices 0 -> 1 joined by n parallel edges.
Quiver kronecker_quiver(int n);
/// m vertices, edges k -> k-1 for k = m-1..1 (edge id k-1 has tail k, head k-1).
Quiver type_a_quiver(int m);

/// Same vertices, every arrow reversed. Edge ids are preserved, so applying
/// it twice returns a quiver equal to the original.
Quiver opposite(const Quiver& q);

using DimensionVector = std::vector<int>;

bool is_indivisible(const DimensionVector& d);

/// <d,e>_Q = sum_i d_i e_i - sum_a d_{ta} e_{ha}, exact in 64-bit.
long long euler_form(const Quiver& q, const DimensionVector& d, const DimensionVector& e);

/// Composable edge sequence. Stored head-to-tail: edges()[k-1] acts first,
/// edges()[0] last, matching phi_p = phi_{a_1} o ... o phi_{a_k}.
class Path {
public:
    static Path trivial(QuiverPtr q, int vertex);
    static Path from_edges(QuiverPtr q, std::vector<int> edge_ids);

    bool is_trivial() const { return edges_.empty(); }
    int length() const { return static_cast<int>(edges_.size()); }
    /// Vertex the path terminates at (head of the last-applied... first stored edge).
    int head() const;
    /// Vertex the path starts at.
    int tail() const;
    const std::vector<int>& edges() const { return edges_; }
    const QuiverPtr& quiver() const { return quiver_; }

    /// this o other (other acts first). Requires other.head() == tail().
    Path composed_with(const Path& other) const;

    bool operator==(const Path& other) const;
    bool operator<(const Path& other) const;  // (length, edge sequence, base vertex)

private:
    Path(QuiverPtr q, int base_vertex, std::vector<int> edges);
    QuiverPtr quiver_;
    int base_vertex_ = 0;  // meaningful for trivial paths only
    std::vector<int> edges_;
};

/// All paths from `from` to `to` of length <= max_len, ordered by
/// (length, lexicographic edge ids). Includes the trivial path when from == to.
/// Throws once more than `cap` paths would be explored.
std::vector<Path> enumerate_paths(const QuiverPtr& q, int from, int to, int max_len,
                                  long long cap = 1'000'000);

/// Q' (x) Q''. Product vertex (i,j) has index i*|Q''_0|+j; the first factor
/// always indexes the slow axis, matching the Kronecker product convention.
struct TensorEdgeOrigin {
    int factor = 1;       // 1: edge from Q' crossed with a Q'' vertex; 2: the other way
    int factor_edge = 0;  // edge id in the owning factor
    int other_vertex = 0; // vertex id in the opposite factor
};

struct TensorQuiverMap {
    QuiverPtr product;
    Quiver factor1, factor2;
    std::vector<std::pair<int, int>> vertex_pairs;  // product vertex -> (i, j)
    std::vector<TensorEdgeOrigin> edge_origins;     // product edge -> origin tag

    int vertex_index(int i, int j) const;
    /// Product edge id for (alpha, j).
    int first_factor_edge(int alpha, int j) const;
    /// Product edge id for (i, beta).
    int second_factor_edge(int i, int beta) const;
};

TensorQuiverMap tensor_quiver(const Quiver& q1, const Quiver& q2);

/// Correspondence record for collapse/clone/delete. Every source edge maps to
/// exactly one result edge or to -1 (deleted). Clone copies are listed
/// separately in cloned_edges.
struct QuiverOpRecord {
    enum class Kind { collapse_vertices, collapse_edges, clone_vertex, delete_vertex, delete_edge };
    Kind kind;
    Quiver source;
    Quiver result;
    std::vector<int> vertex_map;  // source vertex -> result vertex (-1 deleted)
    std::vector<int> edge_map;    // source edge -> result edge (-1 deleted)
    /// collapse_vertices: result vertex -> ascending source vertices merged into it.
    std::vector<std::vector<int>> vertex_groups;
    /// collapse_edges: the source bundle collapsed onto edge_map[bundle.front()].
    std::vector<int> bundle;
    /// clone_vertex: (result edge id of the copy, source edge id it copies).
    std::vector<std::pair<int, int>> cloned_edges;
    int cloned_vertex = -1;      // source vertex that was cloned
    int clone_new_vertex = -1;   // its copy in the result
};

/// Merges each group of `groups` into one vertex; ungrouped vertices survive
/// unchanged. Groups must be disjoint and nonempty.
QuiverOpRecord collapse_vertices(const Quiver& q, const std::vector<std::vector<int>>& groups);

/// Replaces a bundle of parallel edges (common head, common tail) by one edge.
QuiverOpRecord collapse_edges(const Quiver& q, const std::vector<int>& bundle);

/// Appends a copy of v carrying copies of all incident edges. A loop at v
/// yields a loop at the copy.
QuiverOpRecord clone_vertex(const Quiver& q, int v);

/// Removes v and every incident edge.
QuiverOpRecord delete_vertex(const Quiver& q, int v);

QuiverOpRecord delete_edge(const Quiver& q, int e);

}  // namespace quiverforge
