#include "nbamin/sat.hh"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>

namespace nbamin {

void Cnf::add_clause(Clause clause)
{
    if (clause.empty()) {
        throw std::invalid_argument("empty clause");
    }
    for (Lit l : clause) {
        if (l == 0) {
            throw std::invalid_argument("literal 0 in clause");
        }
        if (std::abs(l) > num_vars) {
            throw std::invalid_argument("literal refers to an undeclared variable");
        }
    }
    clauses.push_back(std::move(clause));
}

bool satisfies(const Cnf& cnf, const Model& model)
{
    if (model.size() < static_cast<std::size_t>(cnf.num_vars) + 1) {
        return false;
    }
    for (const Clause& c : cnf.clauses) {
        const bool sat = std::any_of(c.begin(), c.end(), [&](Lit l) {
            return model[static_cast<std::size_t>(std::abs(l))] == (l > 0);
        });
        if (!sat) {
            return false;
        }
    }
    return true;
}

namespace {

using ILit = std::uint32_t; // 2 * var + negated
using CRef = std::uint32_t;
constexpr CRef no_reason = ~CRef{0};

constexpr std::uint8_t l_false = 0;
constexpr std::uint8_t l_true = 1;
constexpr std::uint8_t l_undef = 2;

inline ILit to_ilit(Lit l) { return 2 * static_cast<ILit>(std::abs(l) - 1) + (l < 0 ? 1 : 0); }
inline ILit negate(ILit l) { return l ^ 1; }
inline std::uint32_t var_of(ILit l) { return l >> 1; }

double luby(double y, int x)
{
    int size = 1;
    int seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    return std::pow(y, seq);
}

struct StoredClause {
    std::vector<ILit> lits;
    double activity = 0;
    bool learnt = false;
    bool removed = false;
};

struct Watcher {
    CRef cref;
    ILit blocker;
};

/// Max-heap of unassigned variables ordered by activity.
class VarOrder {
public:
    explicit VarOrder(const std::vector<double>& activity) : activity_(activity) {}

    void reserve(std::size_t n) { index_.assign(n, -1); }
    bool contains(std::uint32_t v) const { return index_[v] >= 0; }
    bool empty() const { return heap_.empty(); }

    void insert(std::uint32_t v)
    {
        if (contains(v)) {
            return;
        }
        index_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        up(heap_.size() - 1);
    }

    void increased(std::uint32_t v)
    {
        if (contains(v)) {
            up(static_cast<std::size_t>(index_[v]));
        }
    }

    std::uint32_t pop()
    {
        const std::uint32_t top = heap_.front();
        heap_.front() = heap_.back();
        index_[heap_.front()] = 0;
        heap_.pop_back();
        index_[top] = -1;
        if (!heap_.empty()) {
            down(0);
        }
        return top;
    }

private:
    bool less(std::uint32_t a, std::uint32_t b) const
    {
        return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
    }

    void up(std::size_t i)
    {
        const std::uint32_t v = heap_[i];
        while (i > 0) {
            const std::size_t parent = (i - 1) / 2;
            if (!less(v, heap_[parent])) {
                break;
            }
            heap_[i] = heap_[parent];
            index_[heap_[i]] = static_cast<int>(i);
            i = parent;
        }
        heap_[i] = v;
        index_[v] = static_cast<int>(i);
    }

    void down(std::size_t i)
    {
        const std::uint32_t v = heap_[i];
        for (;;) {
            std::size_t child = 2 * i + 1;
            if (child >= heap_.size()) {
                break;
            }
            if (child + 1 < heap_.size() && less(heap_[child + 1], heap_[child])) {
                ++child;
            }
            if (!less(heap_[child], v)) {
                break;
            }
            heap_[i] = heap_[child];
            index_[heap_[i]] = static_cast<int>(i);
            i = child;
        }
        heap_[i] = v;
        index_[v] = static_cast<int>(i);
    }

    const std::vector<double>& activity_;
    std::vector<std::uint32_t> heap_;
    std::vector<int> index_;
};

class Cdcl {
public:
    Cdcl(const Cnf& cnf, std::uint64_t seed) : order_(activity_)
    {
        const std::size_t n = static_cast<std::size_t>(cnf.num_vars);
        assigns_.assign(n, l_undef);
        polarity_.assign(n, 1);
        level_.assign(n, 0);
        reason_.assign(n, no_reason);
        seen_.assign(n, 0);
        activity_.assign(n, 0.0);
        watches_.resize(2 * n);
        order_.reserve(n);
        if (seed != 0) {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> jitter(0.0, 1e-5);
            for (double& a : activity_) {
                a = jitter(rng);
            }
        }
        for (std::uint32_t v = 0; v < n; ++v) {
            order_.insert(v);
        }
        for (const Clause& c : cnf.clauses) {
            if (!add_input_clause(c)) {
                ok_ = false;
                return;
            }
        }
    }

    SolveResult run(const Budget& budget)
    {
        SolveResult result;
        if (budget.deadline && std::chrono::steady_clock::now() >= *budget.deadline) {
            result.status = SolveStatus::Timeout;
            return result;
        }
        if (!ok_ || propagate() != no_reason) {
            result.status = SolveStatus::Unsat;
            result.stats = stats_;
            return result;
        }
        max_learnts_ = std::max<double>(static_cast<double>(clauses_.size()) / 3.0, 1000.0);
        for (int restart = 0;; ++restart) {
            const auto limit = static_cast<std::uint64_t>(luby(2.0, restart) * 100);
            const std::uint8_t status = search(limit, budget);
            if (status == l_true) {
                result.status = SolveStatus::Sat;
                result.model.assign(assigns_.size() + 1, false);
                for (std::size_t v = 0; v < assigns_.size(); ++v) {
                    result.model[v + 1] = assigns_[v] == l_true;
                }
                break;
            }
            if (status == l_false) {
                result.status = SolveStatus::Unsat;
                break;
            }
            if (out_of_budget(budget)) {
                result.status = SolveStatus::Timeout;
                break;
            }
            ++stats_.restarts;
            cancel_until(0);
        }
        result.stats = stats_;
        return result;
    }

private:
    std::uint8_t value(ILit l) const
    {
        const std::uint8_t a = assigns_[var_of(l)];
        return a == l_undef ? l_undef : static_cast<std::uint8_t>(a ^ (l & 1));
    }

    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    void enqueue(ILit l, CRef from)
    {
        const std::uint32_t v = var_of(l);
        assigns_[v] = static_cast<std::uint8_t>((l & 1) ? l_false : l_true);
        level_[v] = decision_level();
        reason_[v] = from;
        trail_.push_back(l);
    }

    bool add_input_clause(const Clause& input)
    {
        std::vector<ILit> lits;
        lits.reserve(input.size());
        for (Lit l : input) {
            lits.push_back(to_ilit(l));
        }
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (std::size_t i = 1; i < lits.size(); ++i) {
            if (lits[i] == negate(lits[i - 1])) {
                return true; // tautology
            }
        }
        if (lits.size() == 1) {
            const std::uint8_t v = value(lits[0]);
            if (v == l_false) {
                return false;
            }
            if (v == l_undef) {
                enqueue(lits[0], no_reason);
            }
            return true;
        }
        attach(std::move(lits), false);
        return true;
    }

    CRef attach(std::vector<ILit> lits, bool learnt)
    {
        const CRef cref = static_cast<CRef>(clauses_.size());
        watches_[lits[0]].push_back({cref, lits[1]});
        watches_[lits[1]].push_back({cref, lits[0]});
        clauses_.push_back({std::move(lits), 0.0, learnt, false});
        if (learnt) {
            learnts_.push_back(cref);
        }
        return cref;
    }

    /// Returns the conflicting clause or no_reason.
    CRef propagate()
    {
        CRef conflict = no_reason;
        while (qhead_ < trail_.size()) {
            const ILit falsified = negate(trail_[qhead_++]);
            ++stats_.propagations;
            auto& ws = watches_[falsified];
            std::size_t i = 0;
            std::size_t j = 0;
            while (i < ws.size()) {
                const Watcher w = ws[i++];
                if (value(w.blocker) == l_true) {
                    ws[j++] = w;
                    continue;
                }
                StoredClause& c = clauses_[w.cref];
                if (c.removed) {
                    continue;
                }
                auto& lits = c.lits;
                if (lits[0] == falsified) {
                    std::swap(lits[0], lits[1]);
                }
                const ILit first = lits[0];
                if (first != w.blocker && value(first) == l_true) {
                    ws[j++] = {w.cref, first};
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < lits.size(); ++k) {
                    if (value(lits[k]) != l_false) {
                        std::swap(lits[1], lits[k]);
                        watches_[lits[1]].push_back({w.cref, first});
                        moved = true;
                        break;
                    }
                }
                if (moved) {
                    continue;
                }
                ws[j++] = {w.cref, first};
                if (value(first) == l_false) {
                    conflict = w.cref;
                    qhead_ = trail_.size();
                    while (i < ws.size()) {
                        ws[j++] = ws[i++];
                    }
                } else {
                    enqueue(first, w.cref);
                }
            }
            ws.resize(j);
        }
        return conflict;
    }

    void bump_var(std::uint32_t v)
    {
        activity_[v] += var_inc_;
        if (activity_[v] > 1e100) {
            for (double& a : activity_) {
                a *= 1e-100;
            }
            var_inc_ *= 1e-100;
        }
        order_.increased(v);
    }

    void bump_clause(StoredClause& c)
    {
        c.activity += cla_inc_;
        if (c.activity > 1e20) {
            for (CRef r : learnts_) {
                clauses_[r].activity *= 1e-20;
            }
            cla_inc_ *= 1e-20;
        }
    }

    bool redundant(ILit l) const
    {
        const CRef r = reason_[var_of(l)];
        if (r == no_reason) {
            return false;
        }
        const auto& lits = clauses_[r].lits;
        for (std::size_t k = 1; k < lits.size(); ++k) {
            const std::uint32_t v = var_of(lits[k]);
            if (!seen_[v] && level_[v] > 0) {
                return false;
            }
        }
        return true;
    }

    void analyze(CRef conflict, std::vector<ILit>& learnt, int& backtrack)
    {
        learnt.clear();
        learnt.push_back(0);
        int path = 0;
        ILit p = 0;
        bool have_p = false;
        std::size_t index = trail_.size();
        std::vector<std::uint32_t> to_clear;

        do {
            StoredClause& c = clauses_[conflict];
            if (c.learnt) {
                bump_clause(c);
            }
            for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
                const ILit q = c.lits[k];
                const std::uint32_t v = var_of(q);
                if (!seen_[v] && level_[v] > 0) {
                    bump_var(v);
                    seen_[v] = 1;
                    to_clear.push_back(v);
                    if (level_[v] >= decision_level()) {
                        ++path;
                    } else {
                        learnt.push_back(q);
                    }
                }
            }
            while (!seen_[var_of(trail_[--index])]) {
            }
            p = trail_[index];
            have_p = true;
            conflict = reason_[var_of(p)];
            seen_[var_of(p)] = 0;
            --path;
        } while (path > 0);
        learnt[0] = negate(p);

        std::size_t keep = 1;
        for (std::size_t k = 1; k < learnt.size(); ++k) {
            if (!redundant(learnt[k])) {
                learnt[keep++] = learnt[k];
            }
        }
        learnt.resize(keep);

        backtrack = 0;
        if (learnt.size() > 1) {
            std::size_t max_k = 1;
            for (std::size_t k = 2; k < learnt.size(); ++k) {
                if (level_[var_of(learnt[k])] > level_[var_of(learnt[max_k])]) {
                    max_k = k;
                }
            }
            std::swap(learnt[1], learnt[max_k]);
            backtrack = level_[var_of(learnt[1])];
        }
        for (std::uint32_t v : to_clear) {
            seen_[v] = 0;
        }
    }

    void cancel_until(int level)
    {
        if (decision_level() <= level) {
            return;
        }
        for (std::size_t k = trail_.size(); k > trail_lim_[level]; --k) {
            const std::uint32_t v = var_of(trail_[k - 1]);
            assigns_[v] = l_undef;
            reason_[v] = no_reason;
            polarity_[v] = trail_[k - 1] & 1;
            order_.insert(v);
        }
        qhead_ = trail_lim_[level];
        trail_.resize(trail_lim_[level]);
        trail_lim_.resize(level);
    }

    bool locked(CRef r) const
    {
        const auto& c = clauses_[r];
        return reason_[var_of(c.lits[0])] == r && value(c.lits[0]) == l_true;
    }

    void reduce_db()
    {
        std::sort(learnts_.begin(), learnts_.end(), [&](CRef a, CRef b) {
            const auto& x = clauses_[a];
            const auto& y = clauses_[b];
            if ((x.lits.size() > 2) != (y.lits.size() > 2)) {
                return x.lits.size() > 2;
            }
            return x.activity < y.activity;
        });
        const std::size_t half = learnts_.size() / 2;
        std::vector<CRef> kept;
        for (std::size_t k = 0; k < learnts_.size(); ++k) {
            StoredClause& c = clauses_[learnts_[k]];
            if (k < half && c.lits.size() > 2 && !locked(learnts_[k])) {
                c.removed = true;
                c.lits.clear();
                c.lits.shrink_to_fit();
            } else {
                kept.push_back(learnts_[k]);
            }
        }
        learnts_ = std::move(kept);
    }

    bool out_of_budget(const Budget& budget) const
    {
        if (budget.max_conflicts && stats_.conflicts >= *budget.max_conflicts) {
            return true;
        }
        return budget.deadline && std::chrono::steady_clock::now() >= *budget.deadline;
    }

    std::uint8_t search(std::uint64_t conflict_limit, const Budget& budget)
    {
        std::uint64_t conflicts_here = 0;
        std::vector<ILit> learnt;
        for (;;) {
            const CRef conflict = propagate();
            if (conflict != no_reason) {
                ++stats_.conflicts;
                ++conflicts_here;
                if (decision_level() == 0) {
                    return l_false;
                }
                int backtrack = 0;
                analyze(conflict, learnt, backtrack);
                cancel_until(backtrack);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], no_reason);
                } else {
                    const CRef r = attach(learnt, true);
                    bump_clause(clauses_[r]);
                    enqueue(learnt[0], r);
                }
                var_inc_ /= 0.95;
                cla_inc_ /= 0.999;
                if ((stats_.conflicts & 255) == 0 && out_of_budget(budget)) {
                    return l_undef;
                }
                if (budget.max_conflicts && stats_.conflicts >= *budget.max_conflicts) {
                    return l_undef;
                }
                continue;
            }
            if (conflicts_here >= conflict_limit) {
                return l_undef;
            }
            if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_) {
                reduce_db();
                max_learnts_ *= 1.1;
            }
            std::uint32_t next = ~0u;
            while (!order_.empty()) {
                const std::uint32_t v = order_.pop();
                if (assigns_[v] == l_undef) {
                    next = v;
                    break;
                }
            }
            if (next == ~0u) {
                return l_true;
            }
            ++stats_.decisions;
            if ((stats_.decisions & 1023) == 0 && out_of_budget(budget)) {
                return l_undef;
            }
            trail_lim_.push_back(trail_.size());
            enqueue(2 * next + polarity_[next], no_reason);
        }
    }

    bool ok_ = true;
    std::vector<StoredClause> clauses_;
    std::vector<CRef> learnts_;
    std::vector<std::vector<Watcher>> watches_;
    std::vector<std::uint8_t> assigns_;
    std::vector<std::uint8_t> polarity_;
    std::vector<int> level_;
    std::vector<CRef> reason_;
    std::vector<char> seen_;
    std::vector<double> activity_;
    VarOrder order_;
    std::vector<ILit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;
    double max_learnts_ = 0;
    SolverStats stats_;
};

} // namespace

SolveResult solve(const Cnf& cnf, const Budget& budget, std::uint64_t seed)
{
    Cdcl solver(cnf, seed);
    SolveResult result = solver.run(budget);
    if (result.status == SolveStatus::Sat && !satisfies(cnf, result.model)) {
        throw std::logic_error("embedded solver produced a model that violates the CNF");
    }
    return result;
}

} // namespace nbamin
