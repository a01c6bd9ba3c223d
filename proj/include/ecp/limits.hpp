#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <stdexcept>

namespace ecp {

/// Thrown when a search exceeds its node or time budget, or is cancelled
/// cooperatively. Callers translate this into an explicit "unknown" outcome;
/// it is never turned into a yes/no answer.
struct BudgetExceeded : std::runtime_error {
    BudgetExceeded() : std::runtime_error("search budget exceeded") {}
};

struct SearchLimits {
    std::uint64_t node_budget = UINT64_MAX;
    std::chrono::milliseconds time_budget = std::chrono::milliseconds::max();
    /// Optional shared flag for cooperative cancellation (portfolio races).
    std::atomic<bool>* cancel = nullptr;

    static SearchLimits unlimited() { return SearchLimits{}; }
};

/// Per-solve budget bookkeeping. Cheap to tick; the wall clock is consulted
/// only every 1024 nodes.
class BudgetGuard {
public:
    explicit BudgetGuard(const SearchLimits& limits)
        : limits_(limits), start_(std::chrono::steady_clock::now()) {}

    void tick() {
        ++nodes_;
        if (nodes_ > limits_.node_budget) throw BudgetExceeded{};
        if ((nodes_ & 1023) == 0) check_slow();
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    void check_slow() const {
        if (limits_.cancel && limits_.cancel->load(std::memory_order_relaxed))
            throw BudgetExceeded{};
        if (limits_.time_budget != std::chrono::milliseconds::max()) {
            auto elapsed = std::chrono::steady_clock::now() - start_;
            if (elapsed > limits_.time_budget) throw BudgetExceeded{};
        }
    }

    SearchLimits limits_;
    std::chrono::steady_clock::time_point start_;
    std::uint64_t nodes_ = 0;
};

/// Counters surfaced in solve reports. All values are deterministic
/// functions of the input (no timing enters them).
struct SolveStats {
    std::uint64_t search_nodes = 0;
    std::uint64_t dp_states = 0;
    std::uint64_t dp_states_peak = 0;  // largest single DP table
    std::uint64_t program_vars = 0;

    void merge(const SolveStats& other) {
        search_nodes += other.search_nodes;
        dp_states += other.dp_states;
        dp_states_peak = dp_states_peak > other.dp_states_peak ? dp_states_peak : other.dp_states_peak;
        program_vars += other.program_vars;
    }
};

}  // namespace ecp
