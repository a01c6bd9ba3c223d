#pragma once

#include <cstdint>
#include <optional>

#include "ecp/graph.hpp"
#include "ecp/limits.hpp"

namespace ecp {

enum class OracleStatus { kPartition, kNoSolution, kBudgetExceeded };

struct OracleResult {
    OracleStatus status = OracleStatus::kBudgetExceeded;
    std::optional<Partition> partition;
    std::uint64_t nodes = 0;
};

/// Exhaustive exact solver by canonical enumeration: a new part is always
/// seeded at the lowest-indexed unassigned vertex and grown only through
/// neighbours of already chosen part members. Prunes a branch when the part
/// exceeds the large size, when closing a part leaves an infeasible
/// small/large budget, or when an unassigned vertex has no remaining
/// connection route. A returned partition always verifies; no-solution is
/// exhaustive.
OracleResult solve_exact(const Instance& instance, const SearchLimits& limits);

struct EnumerateResult {
    bool complete = false;  // false iff the budget was hit
    std::uint64_t count = 0;
    std::uint64_t nodes = 0;
};

/// Counts distinct valid partitions with unlabeled part ids. Each unlabeled
/// set-partition is visited at most once (parts are opened in increasing
/// seed order and each part's seed is its minimum vertex).
EnumerateResult enumerate_all(const Instance& instance, const SearchLimits& limits);

}  // namespace ecp
