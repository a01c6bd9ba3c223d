#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ecp {

using Vertex = int;

/// Simple undirected graph over vertices 0..n-1 with sorted adjacency lists.
/// No self-loops, no parallel edges; adjacency is kept symmetric.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n) : adj_(n) {}

    /// Builds a graph and validates the edge list (range, loops, duplicates).
    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

    int vertex_count() const { return static_cast<int>(adj_.size()); }
    int edge_count() const { return m_; }

    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    bool has_edge(int u, int v) const;

    /// Adds an undirected edge; keeps lists sorted. Throws on loops,
    /// duplicates, or out-of-range endpoints.
    void add_edge(int u, int v);

    bool is_connected() const;
    bool is_clique() const;

    /// Sorted edge list (u < v), ascending.
    std::vector<std::pair<int, int>> edges() const;

    /// Induced sub-graph on `keep` (sorted or not); vertices are renumbered
    /// by ascending original index. Optionally reports the index map.
    Graph induced(const std::vector<int>& keep, std::vector<int>* old_to_new = nullptr) const;

    /// Connected components as vertex lists, ordered by minimum vertex.
    std::vector<std::vector<int>> components() const;

    /// Component decomposition of the sub-graph induced on `subset`.
    std::vector<std::vector<int>> components_within(const std::vector<int>& subset) const;

    /// Complement graph (no loops).
    Graph complement() const;

    bool operator==(const Graph& other) const { return adj_ == other.adj_; }

private:
    std::vector<std::vector<int>> adj_;
    int m_ = 0;
};

/// Part-size arithmetic shared by every solver: sizes differ by at most one
/// and exactly `num_large` parts have the larger size.
struct SizeBounds {
    int small = 0;      // floor(n/p)
    int large = 0;      // ceil(n/p)
    int num_large = 0;  // n mod p

    /// Requires 1 <= p <= n.
    static SizeBounds from(int n, int p);
};

/// A problem instance: a connected graph together with the part count p,
/// 1 <= p <= n.
struct Instance {
    Graph graph;
    int parts = 1;

    SizeBounds bounds() const { return SizeBounds::from(graph.vertex_count(), parts); }
};

/// Vertex -> part id in 0..p-1.
struct Partition {
    std::vector<int> assignment;

    std::vector<std::vector<int>> parts(int p) const;
};

struct Verdict {
    bool valid = false;
    std::vector<std::string> violations;
};

/// Parse error with 1-based line number.
struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_no, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

/// Reads the instance file format:
///   c <comment>           ignored
///   p ecp <n> <m> <p>     exactly once, first non-comment line
///   e <u> <v>             m lines, 1-indexed, u != v
/// Throws ParseError on malformed input, indices out of range, duplicate
/// edges, p out of [1, n], or a disconnected graph.
Instance parse_instance(std::istream& in);
Instance parse_instance_text(const std::string& text);
Instance load_instance_file(const std::string& path);

/// Canonical serialization: header, then edges ascending. parse(serialize(x))
/// reproduces x exactly.
std::string serialize_instance(const Instance& instance);

/// FNV-1a over the canonical serialization, as fixed-width hex.
std::string instance_digest(const Instance& instance);

/// Solution file: "s yes" followed by n lines "a <v> <part>" (both
/// 1-indexed), or "s no".
std::string serialize_solution(const Instance& instance, const std::optional<Partition>& partition);
std::optional<Partition> parse_solution_text(const std::string& text, int n);

/// True iff the sub-graph induced on `subset` is connected. A single vertex
/// counts as connected; the empty subset is rejected.
bool is_connected_subset(const Graph& graph, const std::vector<int>& subset);

/// Checks the full solution contract: every part id in 0..p-1 non-empty,
/// every part connected, and the part-size multiset is exactly
/// {large x num_large, small x (p - num_large)}. Assignments must cover all
/// vertices; part ids >= p are rejected with an exception.
Verdict verify_partition(const Instance& instance, const Partition& partition);

}  // namespace ecp
