#include "ecp/oracle.hpp"

#include <algorithm>

namespace ecp {

namespace {

class CanonicalSearch {
public:
    CanonicalSearch(const Instance& instance, const SearchLimits& limits, bool count_all)
        : graph_(instance.graph),
          n_(instance.graph.vertex_count()),
          bounds_(instance.bounds()),
          count_all_(count_all),
          guard_(limits) {
        assignment_.assign(n_, -1);
        rem_small_ = instance.parts - bounds_.num_large;
        rem_large_ = bounds_.num_large;
    }

    void run() {
        open_next_part(0);
    }

    bool found() const { return found_; }
    const std::vector<int>& witness() const { return witness_; }
    std::uint64_t count() const { return count_; }
    std::uint64_t nodes() const { return guard_.nodes(); }

private:
    // Seeds the next part at the lowest unassigned vertex, or records a
    // complete partition when everything is assigned.
    void open_next_part(int part_id) {
        guard_.tick();
        if (found_ && !count_all_) return;
        int seed = -1;
        for (int v = 0; v < n_; ++v)
            if (assignment_[v] == -1) {
                seed = v;
                break;
            }
        if (seed == -1) {
            ++count_;
            if (!found_) {
                found_ = true;
                witness_ = assignment_;
            }
            return;
        }
        if (rem_small_ + rem_large_ == 0) return;
        part_.clear();
        add_member(seed, part_id);
        grow(part_id, {});
        remove_member(seed);
    }

    // Extends the current part through unassigned neighbours, in ascending
    // index order. `banned` vertices were offered earlier on this path and
    // must stay out, so each vertex set is produced exactly once.
    void grow(int part_id, std::vector<int> banned) {
        guard_.tick();
        if (found_ && !count_all_) return;
        const int size = static_cast<int>(part_.size());

        if (size == bounds_.small || size == bounds_.large) try_close(part_id);
        if (size >= bounds_.large) return;
        if (!reachable_enough()) return;

        std::vector<int> candidates;
        for (int v : part_)
            for (int w : graph_.neighbors(v))
                if (assignment_[w] == -1 && !std::binary_search(banned.begin(), banned.end(), w))
                    candidates.push_back(w);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        for (int w : candidates) {
            add_member(w, part_id);
            grow(part_id, banned);
            remove_member(w);
            banned.insert(std::lower_bound(banned.begin(), banned.end(), w), w);
        }
    }

    void try_close(int part_id) {
        const int size = static_cast<int>(part_.size());
        const bool as_large = size == bounds_.large && bounds_.large != bounds_.small;
        int& budget = as_large ? rem_large_ : rem_small_;
        if (size == bounds_.small && !as_large && rem_small_ == 0) return;
        if (as_large && rem_large_ == 0) return;
        if (!close_feasible()) return;
        std::vector<int> saved_part = part_;
        --budget;
        open_next_part(part_id + 1);
        ++budget;
        part_ = std::move(saved_part);
    }

    // After closing, future parts live entirely inside single components of
    // the unassigned sub-graph; check that the component sizes admit some
    // split into the remaining small/large budget.
    bool close_feasible() const {
        std::vector<int> unassigned;
        for (int v = 0; v < n_; ++v)
            if (assignment_[v] == -1) unassigned.push_back(v);
        if (unassigned.empty()) return rem_small_ + rem_large_ >= 1;  // this close is the last part

        auto comps = graph_.components_within(unassigned);
        // cur[b] = some prefix of components splits off exactly b large parts.
        std::vector<char> cur(static_cast<std::size_t>(rem_large_) + 1, 0);
        cur[0] = 1;
        std::vector<char> next;
        for (const auto& comp : comps) {
            const int size = static_cast<int>(comp.size());
            next.assign(cur.size(), 0);
            bool any = false;
            for (int b = 0; b < static_cast<int>(cur.size()); ++b) {
                if (!cur[b]) continue;
                for (int bl = 0; b + bl < static_cast<int>(cur.size()); ++bl) {
                    long long rest = size - static_cast<long long>(bl) * bounds_.large;
                    if (rest < 0) break;
                    if (bounds_.small == 0) continue;  // unreachable: small >= 1
                    if (rest % bounds_.small != 0) continue;
                    next[b + bl] = 1;
                    any = true;
                }
            }
            if (!any) return false;
            cur.swap(next);
        }
        // The small-part count per large-count is forced by arithmetic, but
        // trim to the actual remaining budgets. rem_large_ - 1 / rem_small_
        // adjustments happen in try_close via the budget decrement, so here
        // budgets still include the part being closed.
        const int size = static_cast<int>(part_.size());
        const bool as_large = size == bounds_.large && bounds_.large != bounds_.small;
        const int rl = rem_large_ - (as_large ? 1 : 0);
        const int rs = rem_small_ - (as_large ? 0 : 1);
        if (rl < 0 || rs < 0) return false;
        if (rl >= static_cast<int>(cur.size()) || !cur[rl]) return false;
        long long total = 0;
        for (const auto& comp : comps) total += static_cast<long long>(comp.size());
        return total == static_cast<long long>(rl) * bounds_.large + static_cast<long long>(rs) * bounds_.small;
    }

    // The current part must still be able to reach a closable size through
    // unassigned territory.
    bool reachable_enough() const {
        const int required = rem_small_ > 0 ? bounds_.small : bounds_.large;
        if (static_cast<int>(part_.size()) >= required) return true;
        std::vector<char> seen(n_, 0);
        std::vector<int> stack;
        int reach = static_cast<int>(part_.size());
        for (int v : part_) seen[v] = 1;
        for (int v : part_) stack.push_back(v);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : graph_.neighbors(v)) {
                if (seen[w]) continue;
                if (assignment_[w] != -1) continue;
                seen[w] = 1;
                ++reach;
                if (reach >= required) return true;
                stack.push_back(w);
            }
        }
        return reach >= required;
    }

    void add_member(int v, int part_id) {
        assignment_[v] = part_id;
        part_.push_back(v);
    }

    void remove_member(int v) {
        assignment_[v] = -1;
        part_.erase(std::find(part_.begin(), part_.end(), v));
    }

    const Graph& graph_;
    int n_;
    SizeBounds bounds_;
    bool count_all_;
    BudgetGuard guard_;

    std::vector<int> assignment_;
    std::vector<int> part_;
    int rem_small_ = 0, rem_large_ = 0;

    bool found_ = false;
    std::vector<int> witness_;
    std::uint64_t count_ = 0;
};

}  // namespace

OracleResult solve_exact(const Instance& instance, const SearchLimits& limits) {
    CanonicalSearch search(instance, limits, /*count_all=*/false);
    OracleResult result;
    try {
        search.run();
    } catch (const BudgetExceeded&) {
        result.status = OracleStatus::kBudgetExceeded;
        result.nodes = search.nodes();
        return result;
    }
    result.nodes = search.nodes();
    if (search.found()) {
        result.status = OracleStatus::kPartition;
        result.partition = Partition{search.witness()};
    } else {
        result.status = OracleStatus::kNoSolution;
    }
    return result;
}

EnumerateResult enumerate_all(const Instance& instance, const SearchLimits& limits) {
    CanonicalSearch search(instance, limits, /*count_all=*/true);
    EnumerateResult result;
    try {
        search.run();
        result.complete = true;
    } catch (const BudgetExceeded&) {
        result.complete = false;
    }
    result.count = search.count();
    result.nodes = search.nodes();
    return result;
}

}  // namespace ecp
