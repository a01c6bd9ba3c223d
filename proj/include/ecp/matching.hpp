#pragma once

#include <utility>
#include <vector>

#include "ecp/graph.hpp"

namespace ecp {

/// Maximum-cardinality matching in a bipartite graph given as edges between
/// left indices [0, n_left) and right indices [0, n_right). Hopcroft-Karp;
/// deterministic for a fixed edge order. Returns the matched pairs
/// (left, right) sorted by left index.
std::vector<std::pair<int, int>> bipartite_max_matching(int n_left, int n_right,
                                                        const std::vector<std::pair<int, int>>& edges);

/// Maximum-cardinality matching in a general graph (Edmonds' blossom
/// algorithm). Returns for each vertex its mate or -1. Deterministic.
std::vector<int> general_max_matching(const Graph& graph);

int matching_size(const std::vector<int>& mate);

}  // namespace ecp
