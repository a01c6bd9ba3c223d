#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ecp/analyzers.hpp"
#include "ecp/graph.hpp"
#include "ecp/ilp.hpp"
#include "ecp/limits.hpp"

namespace ecp {

/// All subsets of type-graph vertices that induce a connected sub-graph,
/// as sorted class-index lists in ascending bitmask order. Singleton classes
/// are included.
std::vector<std::vector<int>> enumerate_connected_type_subgraphs(const TypePartition& types);

/// Neighbourhood-diversity solver: one integer program over pattern
/// variables x_H and per-type allocations x_H^t, then a greedy realization.
/// Exact: infeasibility of the program proves a no-instance.
std::optional<Partition> solve_neighbourhood_diversity(const Instance& instance, const TypePartition& types,
                                                       const SearchLimits& limits = SearchLimits::unlimited(),
                                                       SolveStats* stats = nullptr);

enum class MwStatus { kYes, kNo, kInconclusive };

struct MwResult {
    MwStatus status = MwStatus::kInconclusive;
    std::optional<Partition> partition;
};

/// Modular-width solver: finds a smallest non-trivial module, extracts
/// whole parts from it with a coverage-maximal program per large-part
/// budget, replaces the remainder by an independent set, and recurses; a
/// module-free graph is handed to the neighbourhood-diversity program.
/// Returned partitions are verified; verification failure reports
/// inconclusive rather than no.
MwResult solve_modular_width(const Instance& instance, const SearchLimits& limits = SearchLimits::unlimited(),
                             SolveStats* stats = nullptr);

/// A full assignment of one piece (component of G - X) to parts, with its
/// per-part contribution counts and the modulator pairs it connects.
struct PieceConfiguration {
    std::vector<int> assignment;                    // per piece vertex (piece order)
    std::vector<int> part_sizes;                    // contribution to each part
    std::vector<std::pair<int, int>> connections;   // realized modulator pairs (u < v)
};

/// All valid configurations of a piece against the given modulator parts:
/// every chunk component must see its part's modulator set; a chunk sent to
/// an empty part must be connected as a whole. Deduplicated by
/// (sizes, connections) signature.
std::vector<PieceConfiguration> build_piece_configurations(const std::vector<int>& piece, const Graph& graph,
                                                           const std::vector<std::vector<int>>& modulator_parts);

enum class ViStatus { kPartition, kNoSolution, kDelegated, kBudgetExceeded };

struct ViResult {
    ViStatus status = ViStatus::kBudgetExceeded;
    std::optional<Partition> partition;
};

/// Vertex-integrity solver (p <= k): guesses the modulator partition and the
/// connections realized through pieces, then solves the configuration
/// program; p > k is delegated to the rest of the portfolio.
ViResult solve_vertex_integrity(const Instance& instance, const VertexIntegrity& witness,
                                const SearchLimits& limits = SearchLimits::unlimited(),
                                SolveStats* stats = nullptr);

/// 3-path-vertex-cover solver. For p > k: small >= 3 is a no, small = 1 is
/// maximum matching, small = 2 guesses the modulator blocks and single-vertex
/// bridges and solves a size-only program with leftover edges as their own
/// parts. For p <= k: guesses the partition plus connecting chunks grafted
/// onto parts, then solves the program without connectivity rows.
std::optional<Partition> solve_three_pvc(const Instance& instance, const std::vector<int>& modulator,
                                         const SearchLimits& limits = SearchLimits::unlimited(),
                                         SolveStats* stats = nullptr);

}  // namespace ecp
