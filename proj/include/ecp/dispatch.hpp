#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ecp/analyzers.hpp"
#include "ecp/graph.hpp"
#include "ecp/limits.hpp"

namespace ecp {

enum class Algorithm {
    kAuto,
    kOracle,
    kClique,
    kCograph,
    kTreewidth,
    kNd,
    kMw,
    kDclique,
    kDcluster,
    kVi,
    kThreePvc,
};

std::optional<Algorithm> algorithm_from_name(const std::string& name);
const char* algorithm_name(Algorithm algorithm);

enum class Answer { kYes, kNo, kUnknown };
const char* answer_name(Answer answer);

struct SolveReport {
    std::string digest;
    int n = 0, m = 0, p = 0;
    std::string algorithm;  // solver actually used
    Answer answer = Answer::kUnknown;
    std::optional<Partition> certificate;
    std::optional<ParameterReport> parameters;
    SolveStats stats;
    long long elapsed_ms = 0;
    std::string note;  // precondition failures, delegations, budget hits

    std::string to_text() const;
};

/// Selection thresholds for the automatic strategy; all overridable from the
/// command line.
struct DispatchConfig {
    int max_nd = 12;
    int max_modulator = 6;
    int max_cover = 6;
    int max_vi = 6;
    int max_treewidth = 4;
    int max_oracle_n = 18;
    ParameterBudgets budgets;
};

/// Runs one solver (or the automatic priority list) on the instance. A yes
/// answer always carries a verifier-checked certificate; budget failures and
/// delegations surface as unknown, never as no.
/// Throws std::invalid_argument when a forced solver's precondition fails.
SolveReport dispatch(const Instance& instance, Algorithm algorithm, const DispatchConfig& config,
                     const SearchLimits& limits);

/// Races the oracle against the automatic pick on two threads; the first
/// definitive answer wins and the loser is cancelled cooperatively.
SolveReport dispatch_portfolio(const Instance& instance, const DispatchConfig& config, const SearchLimits& limits);

struct BenchRow {
    std::string path;
    SolveReport report;
    bool parse_error = false;
    std::string error;
};

struct BenchResult {
    std::vector<BenchRow> rows;

    /// CSV: digest,n,m,p,algorithm,answer,nodes,states,millis. The millis
    /// column is zero unless wall-clock output was requested, so repeated
    /// runs are byte-identical.
    std::string to_csv(bool wall_clock = false) const;
    std::string to_text() const;
};

/// Solves every instance in manifest order; parse failures become error rows
/// and the run continues. `jobs` > 1 solves instances in parallel workers,
/// output order is unaffected.
BenchResult run_bench(const std::vector<std::string>& paths, Algorithm algorithm, const DispatchConfig& config,
                      const SearchLimits& limits, int jobs = 1, bool portfolio = false);

}  // namespace ecp
