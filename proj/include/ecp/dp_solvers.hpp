#pragma once

#include <optional>
#include <vector>

#include "ecp/analyzers.hpp"
#include "ecp/graph.hpp"
#include "ecp/limits.hpp"

namespace ecp {

/// Linear-time solver for cliques: the first num_large parts get the large
/// size, the rest the small size, vertices assigned in index order. Rejects
/// non-clique inputs.
Partition solve_clique(const Instance& instance);

/// Feasibility of partitioning the complete bipartite graph K_{k,l} into
/// connected parts of size small or large using exactly g large parts. Every
/// part takes >= 1 vertex from each side.
class BipartiteFeasibilityTable {
public:
    /// Requires bounds.small >= 2 (the co-graph DP regime).
    BipartiteFeasibilityTable(int n, const SizeBounds& bounds);

    bool feasible(int k, int l, int g) const;
    /// Chunks (left_count, right_count, is_large) realizing a feasible cell.
    std::vector<std::tuple<int, int, bool>> decompose(int k, int l, int g) const;

    int max_g() const { return max_g_; }

private:
    int n_, max_g_;
    SizeBounds bounds_;
    std::vector<char> table_;  // (k, l, g) row-major
    std::size_t index(int k, int l, int g) const;
};

/// Co-graph solver: bottom-up DP over the co-tree with states (uncovered
/// vertices, large parts used); delegates to maximum matching when the large
/// size is at most 2. The co-tree must evaluate to the instance graph.
std::optional<Partition> solve_cograph(const Instance& instance, const CoTree& cotree, SolveStats* stats = nullptr);

/// Tree-width DP over a nice tree decomposition. States are (partition of
/// the bag into opened parts, past-vertex count per opened part, number of
/// closed large parts); witness via back-pointers.
std::optional<Partition> solve_treewidth(const Instance& instance, const NiceTreeDecomposition& decomposition,
                                         const SearchLimits& limits = SearchLimits::unlimited(),
                                         SolveStats* stats = nullptr);

/// Distance-to-clique solver: branches over modulator partitions and part
/// sizes, resolves the clique-side connection demands exactly over sibling
/// groups, fills greedily. Requires graph minus modulator to be a clique.
std::optional<Partition> solve_distance_to_clique(const Instance& instance, const std::vector<int>& modulator,
                                                  const SearchLimits& limits = SearchLimits::unlimited(),
                                                  SolveStats* stats = nullptr);

/// Distance-to-cluster solver: branches over modulator partitions and
/// connecting bridges into the cliques, then fills by a DP over cliques with
/// per-part accumulated sizes and a matching-based attachment check.
/// Requires graph minus modulator to be a disjoint union of cliques.
std::optional<Partition> solve_cluster_modulator(const Instance& instance, const std::vector<int>& modulator,
                                                 const SearchLimits& limits = SearchLimits::unlimited(),
                                                 SolveStats* stats = nullptr);

}  // namespace ecp
