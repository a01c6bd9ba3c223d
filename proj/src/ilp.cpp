#include "ecp/ilp.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ecp {

int IntegerProgram::add_var(long long lo, long long hi) {
    if (lo > hi) throw std::invalid_argument("variable with empty domain");
    vars.push_back({lo, hi});
    return static_cast<int>(vars.size()) - 1;
}

void IntegerProgram::add_constraint(std::vector<LinTerm> terms, Relation relation, long long rhs) {
    constraints.push_back({std::move(terms), relation, rhs});
}

std::string IntegerProgram::dump() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < vars.size(); ++i)
        out << "var x" << i << ' ' << vars[i].lo << ' ' << vars[i].hi << '\n';
    auto row = [&](const LinearConstraint& c) {
        for (std::size_t t = 0; t < c.terms.size(); ++t) {
            if (t) out << " + ";
            out << c.terms[t].coeff << "*x" << c.terms[t].var;
        }
        switch (c.relation) {
            case Relation::kLessEq: out << " <= "; break;
            case Relation::kEqual: out << " = "; break;
            case Relation::kGreaterEq: out << " >= "; break;
        }
        out << c.rhs << '\n';
    };
    for (const auto& c : constraints) {
        out << "con ";
        row(c);
    }
    if (!objective.empty()) {
        out << (maximize ? "max " : "min ");
        for (std::size_t t = 0; t < objective.size(); ++t) {
            if (t) out << " + ";
            out << objective[t].coeff << "*x" << objective[t].var;
        }
        out << '\n';
    }
    return out.str();
}

namespace {

long long div_floor(long long a, long long b) {
    long long q = a / b, r = a % b;
    return r != 0 && ((r < 0) != (b < 0)) ? q - 1 : q;
}

long long div_ceil(long long a, long long b) {
    long long q = a / b, r = a % b;
    return r != 0 && ((r < 0) == (b < 0)) ? q + 1 : q;
}

class IpSolver {
public:
    IpSolver(const IntegerProgram& program, const SearchLimits& limits) : prog_(program), guard_(limits) {
        const int n = static_cast<int>(prog_.vars.size());
        lo_.resize(n);
        hi_.resize(n);
        for (int i = 0; i < n; ++i) {
            lo_[i] = prog_.vars[i].lo;
            hi_[i] = prog_.vars[i].hi;
        }
    }

    IpResult run() {
        IpResult result;
        try {
            if (propagate()) search();
            result.status = found_ ? IpStatus::kFeasible : IpStatus::kInfeasible;
        } catch (const BudgetExceeded&) {
            if (prog_.objective.empty() && found_) {
                // A feasibility witness found before the budget hit stays valid.
                result.status = IpStatus::kFeasible;
            } else {
                result.status = IpStatus::kBudgetExceeded;
            }
        }
        result.nodes = guard_.nodes();
        if (result.status == IpStatus::kFeasible) {
            result.assignment = best_;
            result.objective_value = best_value_;
        }
        return result;
    }

private:
    struct TrailEntry {
        int var;
        bool is_lo;
        long long old_value;
    };

    void set_lo(int v, long long value) {
        trail_.push_back({v, true, lo_[v]});
        lo_[v] = value;
    }
    void set_hi(int v, long long value) {
        trail_.push_back({v, false, hi_[v]});
        hi_[v] = value;
    }
    void rewind(std::size_t mark) {
        while (trail_.size() > mark) {
            const TrailEntry& e = trail_.back();
            (e.is_lo ? lo_ : hi_)[e.var] = e.old_value;
            trail_.pop_back();
        }
    }

    // Interval propagation to a fixpoint. Returns false on wipeout.
    bool propagate() {
        bool changed = true;
        int rounds = 0;
        while (changed) {
            changed = false;
            if (++rounds > 200) break;  // fixpoint in practice; cap for safety
            for (const auto& con : prog_.constraints)
                if (!tighten(con.terms, con.relation, con.rhs, changed)) return false;
            // Objective bound as a dynamic constraint once an incumbent exists.
            if (!prog_.objective.empty() && found_) {
                if (prog_.maximize) {
                    if (!tighten(prog_.objective, Relation::kGreaterEq, best_value_ + 1, changed)) return false;
                } else {
                    if (!tighten(prog_.objective, Relation::kLessEq, best_value_ - 1, changed)) return false;
                }
            }
        }
        return true;
    }

    bool tighten(const std::vector<LinTerm>& terms, Relation relation, long long rhs, bool& changed) {
        long long min_sum = 0, max_sum = 0;
        for (const auto& t : terms) {
            if (t.coeff >= 0) {
                min_sum += t.coeff * lo_[t.var];
                max_sum += t.coeff * hi_[t.var];
            } else {
                min_sum += t.coeff * hi_[t.var];
                max_sum += t.coeff * lo_[t.var];
            }
        }
        if (relation != Relation::kGreaterEq) {  // <=
            if (min_sum > rhs) return false;
            for (const auto& t : terms) {
                if (t.coeff == 0) continue;
                // Slack available to variable t on top of its min contribution.
                long long others_min = min_sum - (t.coeff >= 0 ? t.coeff * lo_[t.var] : t.coeff * hi_[t.var]);
                long long budget = rhs - others_min;
                if (t.coeff > 0) {
                    long long bound = div_floor(budget, t.coeff);
                    if (bound < hi_[t.var]) {
                        if (bound < lo_[t.var]) return false;
                        set_hi(t.var, bound);
                        changed = true;
                    }
                } else {
                    long long bound = div_ceil(budget, t.coeff);
                    if (bound > lo_[t.var]) {
                        if (bound > hi_[t.var]) return false;
                        set_lo(t.var, bound);
                        changed = true;
                    }
                }
            }
        }
        if (relation != Relation::kLessEq) {  // >=
            if (max_sum < rhs) return false;
            for (const auto& t : terms) {
                if (t.coeff == 0) continue;
                long long others_max = max_sum - (t.coeff >= 0 ? t.coeff * hi_[t.var] : t.coeff * lo_[t.var]);
                long long budget = rhs - others_max;
                if (t.coeff > 0) {
                    long long bound = div_ceil(budget, t.coeff);
                    if (bound > lo_[t.var]) {
                        if (bound > hi_[t.var]) return false;
                        set_lo(t.var, bound);
                        changed = true;
                    }
                } else {
                    long long bound = div_floor(budget, t.coeff);
                    if (bound < hi_[t.var]) {
                        if (bound < lo_[t.var]) return false;
                        set_hi(t.var, bound);
                        changed = true;
                    }
                }
            }
        }
        return true;
    }

    // True when the search below is exhausted (used to stop early on pure
    // feasibility).
    bool search() {
        guard_.tick();
        int branch_var = -1;
        for (int v = 0; v < static_cast<int>(lo_.size()); ++v)
            if (lo_[v] < hi_[v]) {
                branch_var = v;
                break;
            }
        if (branch_var == -1) {
            record_solution();
            return prog_.objective.empty();  // stop at the first witness
        }
        const long long from = lo_[branch_var], to = hi_[branch_var];
        for (long long value = from; value <= to; ++value) {
            std::size_t mark = trail_.size();
            set_lo(branch_var, value);
            set_hi(branch_var, value);
            bool done = false;
            if (propagate()) done = search();
            rewind(mark);
            if (done) return true;
        }
        return false;
    }

    void record_solution() {
        long long value = 0;
        for (const auto& t : prog_.objective) value += t.coeff * lo_[t.var];
        if (!found_ || (!prog_.objective.empty() &&
                        (prog_.maximize ? value > best_value_ : value < best_value_))) {
            found_ = true;
            best_value_ = value;
            best_ = lo_;
        }
    }

    const IntegerProgram& prog_;
    BudgetGuard guard_;
    std::vector<long long> lo_, hi_;
    std::vector<TrailEntry> trail_;
    bool found_ = false;
    long long best_value_ = 0;
    std::vector<long long> best_;
};

}  // namespace

IpResult solve_integer_program(const IntegerProgram& program, const SearchLimits& limits) {
    for (const auto& con : program.constraints)
        for (const auto& t : con.terms)
            if (t.var < 0 || t.var >= static_cast<int>(program.vars.size()))
                throw std::invalid_argument("constraint references unknown variable");
    IpSolver solver(program, limits);
    return solver.run();
}

}  // namespace ecp
