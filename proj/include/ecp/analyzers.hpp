#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ecp/graph.hpp"
#include "ecp/limits.hpp"

namespace ecp {

// ---------------------------------------------------------------------------
// Neighbourhood diversity

enum class ClassKind { kClique, kIndependent };

/// Partition of V into twin classes: u, v share a class iff
/// N(u) \ {v} = N(v) \ {u}. The type graph joins two classes iff every
/// (equivalently, some) cross pair is adjacent.
struct TypePartition {
    std::vector<std::vector<int>> classes;       // ordered by minimum vertex
    std::vector<ClassKind> kinds;                // per class
    std::vector<std::vector<char>> type_adj;     // adjacency over class indices
    std::vector<int> class_of;                   // vertex -> class index

    int diversity() const { return static_cast<int>(classes.size()); }
};

TypePartition neighbourhood_diversity(const Graph& graph);

// ---------------------------------------------------------------------------
// Co-trees

enum class CoTreeKind { kLeaf, kUnion, kJoin };

struct CoTreeNode {
    CoTreeKind kind = CoTreeKind::kLeaf;
    int vertex = -1;  // leaves only
    int left = -1, right = -1;
    std::vector<int> vertices;  // sorted vertex set of the subtree
};

struct CoTree {
    std::vector<CoTreeNode> nodes;
    int root = -1;

    /// Rebuilds the graph the tree denotes (union = disjoint union,
    /// join = complete join) over the original vertex ids.
    Graph evaluate(int n) const;
};

/// Binary co-tree of a co-graph, or empty if the graph is not a co-graph
/// (equivalently, contains an induced P4). Multi-way splits are right-folded
/// into binary nodes; components are ordered by minimum vertex.
std::optional<CoTree> build_cotree(const Graph& graph);

// ---------------------------------------------------------------------------
// Nice tree decompositions

enum class NodeKind { kLeaf, kIntroduce, kForget, kJoin };

struct DecompositionNode {
    NodeKind kind = NodeKind::kLeaf;
    int vertex = -1;             // introduce/forget
    std::vector<int> bag;        // sorted
    std::vector<int> children;   // 0, 1 or 2 entries
};

struct NiceTreeDecomposition {
    std::vector<DecompositionNode> nodes;
    int root = -1;
    int width = 0;

    /// Nodes in leaves-to-root order (children before parents).
    std::vector<int> topological_order() const;

    /// Checks all tree-decomposition conditions plus the nice-node shape
    /// constraints; returns a diagnostic on failure.
    std::optional<std::string> validate(const Graph& graph) const;
};

/// Nice tree decomposition of width <= width_budget, if the exact
/// elimination-order search (n <= 20) or the min-fill heuristic (larger n)
/// finds one. The heuristic may exceed the optimum but never the width it
/// reports.
std::optional<NiceTreeDecomposition> compute_nice_tree_decomposition(const Graph& graph, int width_budget);

/// Heuristic upper bound on the tree-width (exact for n <= 20).
int treewidth_upper_bound(const Graph& graph);

// ---------------------------------------------------------------------------
// Modulators

enum class ModulatorFamily {
    kVertexCover,      // remainder has no edge
    kThreePathCover,   // remainder has no 3-vertex path (components <= 2)
    kFourPathCover,    // remainder has no 4-vertex path
    kToClique,         // remainder is a clique
    kToCluster,        // remainder is a disjoint union of cliques
    kToDisjointPaths,  // remainder is a disjoint union of paths
};

const char* family_name(ModulatorFamily family);

/// True iff `graph` minus `removed` lies in the family.
bool family_member(const Graph& graph, ModulatorFamily family, const std::vector<int>& removed);

struct ModulatorReport {
    ModulatorFamily family;
    std::vector<int> modulator;  // sorted
    int size = 0;
};

/// Minimum-size modulator of size <= budget, if one exists, found by
/// bounded-depth branching on violating witnesses with iterative deepening
/// on the size.
std::optional<ModulatorReport> find_modulator(const Graph& graph, ModulatorFamily family, int budget);

// ---------------------------------------------------------------------------
// Vertex integrity

struct VertexIntegrity {
    std::vector<int> modulator;  // X, sorted
    int k = 0;                   // |X| <= k and every component of G-X has <= k vertices
};

/// Minimum k <= budget with a witness X, by iterative deepening that
/// branches on a vertex of an oversized component.
std::optional<VertexIntegrity> vertex_integrity(const Graph& graph, int budget);

// ---------------------------------------------------------------------------
// Parameter report

struct ParameterBudgets {
    int vertex_cover = 8;
    int three_path_cover = 8;
    int four_path_cover = 8;
    int dist_to_clique = 8;
    int dist_to_cluster = 8;
    int vertex_integrity = 8;
    int treewidth = 25;
};

struct ParameterValue {
    bool exceeded = false;
    int value = 0;
};

struct ParameterReport {
    ParameterValue vertex_cover, three_path_cover, four_path_cover;
    ParameterValue dist_to_clique, dist_to_cluster;
    ParameterValue vertex_integrity_k;
    ParameterValue treewidth;  // heuristic upper bound
    int neighbourhood_diversity = 0;
    int feedback_edge_set = 0;  // m - n + 1
    bool is_cograph = false;
    bool is_clique = false;

    /// Line-oriented `param <name> <value|exceeded>` rendering.
    std::string to_text() const;
    /// Ordered (name, value-or-"exceeded") pairs for machine output.
    std::vector<std::pair<std::string, std::string>> entries() const;
};

ParameterReport parameter_report(const Graph& graph, const ParameterBudgets& budgets);

}  // namespace ecp
