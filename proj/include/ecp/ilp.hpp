#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecp/limits.hpp"

namespace ecp {

enum class Relation { kLessEq, kEqual, kGreaterEq };

struct LinTerm {
    int var = 0;
    long long coeff = 0;
};

struct LinearConstraint {
    std::vector<LinTerm> terms;
    Relation relation = Relation::kEqual;
    long long rhs = 0;
};

struct VariableBounds {
    long long lo = 0;
    long long hi = 0;
};

/// Bounded-variable integer program with exact integer arithmetic
/// throughout.
struct IntegerProgram {
    std::vector<VariableBounds> vars;
    std::vector<LinearConstraint> constraints;
    std::vector<LinTerm> objective;  // empty = pure feasibility
    bool maximize = true;

    int add_var(long long lo, long long hi);
    void add_constraint(std::vector<LinTerm> terms, Relation relation, long long rhs);

    /// Line-oriented `var`/`con` dump for external inspection.
    std::string dump() const;
};

enum class IpStatus { kFeasible, kInfeasible, kBudgetExceeded };

struct IpResult {
    IpStatus status = IpStatus::kBudgetExceeded;
    std::vector<long long> assignment;
    long long objective_value = 0;
    std::uint64_t nodes = 0;
};

/// Exact depth-first branch and bound with interval constraint propagation.
/// Feasibility answers are exhaustive; with an objective, the returned
/// assignment is optimal. Variables are branched in declaration order with
/// ascending values, so pure-feasibility answers are lexicographically
/// smallest.
IpResult solve_integer_program(const IntegerProgram& program, const SearchLimits& limits);

}  // namespace ecp
