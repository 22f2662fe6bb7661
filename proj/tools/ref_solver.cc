// Stand-alone reference SAT solver used as the external backend in tests.
// Usage: ref_solver <in.cnf> <out.result>
// Exit code 10 with "SAT <model> 0", or 20 with "UNSAT".
//
// Deliberately written apart from the embedded solver: occurrence-list
// propagation instead of watched literals, decisions by a plain activity scan,
// first-UIP learning without minimization or clause deletion, and geometric
// restarts.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Formula {
    int vars = 0;
    std::vector<std::vector<int>> clauses;
};

bool read_formula(std::istream& in, Formula& f)
{
    std::string line;
    std::vector<int> current;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') {
            continue;
        }
        std::istringstream tokens(line);
        if (line[0] == 'p') {
            std::string p, cnf;
            std::size_t count = 0;
            if (!(tokens >> p >> cnf >> f.vars >> count) || cnf != "cnf") {
                return false;
            }
            header = true;
            continue;
        }
        int lit = 0;
        while (tokens >> lit) {
            if (lit == 0) {
                f.clauses.push_back(current);
                current.clear();
            } else {
                if (std::abs(lit) > f.vars) {
                    return false;
                }
                current.push_back(lit);
            }
        }
    }
    return header && current.empty();
}

class Solver {
public:
    explicit Solver(int vars)
        : n_(vars), value_(n_ + 1, 0), level_(n_ + 1, 0), reason_(n_ + 1, -1), activity_(n_ + 1, 0.0),
          seen_(n_ + 1, 0), occurs_(2 * (n_ + 1))
    {
    }

    bool add(std::vector<int> clause)
    {
        std::sort(clause.begin(), clause.end());
        clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
        for (int l : clause) {
            if (std::binary_search(clause.begin(), clause.end(), -l)) {
                return true;
            }
        }
        if (clause.empty()) {
            return false;
        }
        store(std::move(clause));
        return true;
    }

    bool solve()
    {
        // Level-0 units from the input.
        for (std::size_t c = 0; c < clauses_.size(); ++c) {
            if (clauses_[c].size() == 1) {
                const int l = clauses_[c][0];
                if (val(l) < 0) {
                    return false;
                }
                if (val(l) == 0) {
                    enqueue(l, static_cast<int>(c));
                }
            }
        }
        double restart_limit = 64;
        std::size_t conflicts_here = 0;
        for (;;) {
            const int conflict = propagate();
            if (conflict >= 0) {
                if (decision_level() == 0) {
                    return false;
                }
                int backjump = 0;
                std::vector<int> learnt = analyze(conflict, backjump);
                undo(backjump);
                const int c = store(learnt);
                enqueue(learnt[0], c);
                decay_ *= 1.0 / 0.95;
                ++conflicts_here;
                continue;
            }
            if (conflicts_here >= restart_limit) {
                conflicts_here = 0;
                restart_limit *= 1.5;
                undo(0);
                continue;
            }
            const int v = pick();
            if (v == 0) {
                return true;
            }
            marks_.push_back(trail_.size());
            enqueue(-v, -1);
        }
    }

    int val(int lit) const
    {
        const int v = value_[static_cast<std::size_t>(std::abs(lit))];
        return lit > 0 ? v : -v;
    }

private:
    int decision_level() const { return static_cast<int>(marks_.size()); }
    std::size_t idx(int lit) const { return 2 * static_cast<std::size_t>(std::abs(lit)) + (lit < 0); }

    int store(std::vector<int> clause)
    {
        const int c = static_cast<int>(clauses_.size());
        for (int l : clause) {
            occurs_[idx(l)].push_back(c);
        }
        clauses_.push_back(std::move(clause));
        return c;
    }

    void enqueue(int lit, int reason)
    {
        const auto v = static_cast<std::size_t>(std::abs(lit));
        value_[v] = lit > 0 ? 1 : -1;
        level_[v] = decision_level();
        reason_[v] = reason;
        trail_.push_back(lit);
    }

    void undo(int level)
    {
        if (decision_level() <= level) {
            return;
        }
        const std::size_t mark = marks_[static_cast<std::size_t>(level)];
        while (trail_.size() > mark) {
            const auto v = static_cast<std::size_t>(std::abs(trail_.back()));
            value_[v] = 0;
            reason_[v] = -1;
            trail_.pop_back();
        }
        marks_.resize(static_cast<std::size_t>(level));
        head_ = std::min(head_, trail_.size());
    }

    /// Visits every clause containing the newly falsified literal.
    int propagate()
    {
        while (head_ < trail_.size()) {
            const int falsified = -trail_[head_++];
            for (int c : occurs_[idx(falsified)]) {
                int unassigned = 0;
                int open = 0;
                bool satisfied = false;
                for (int l : clauses_[static_cast<std::size_t>(c)]) {
                    const int v = val(l);
                    if (v > 0) {
                        satisfied = true;
                        break;
                    }
                    if (v == 0) {
                        unassigned = l;
                        if (++open > 1) {
                            break;
                        }
                    }
                }
                if (satisfied || open > 1) {
                    continue;
                }
                if (open == 0) {
                    return c;
                }
                enqueue(unassigned, c);
            }
        }
        return -1;
    }

    std::vector<int> analyze(int conflict, int& backjump)
    {
        std::vector<int> learnt{0};
        int pending = 0;
        int lit = 0;
        std::size_t pos = trail_.size();
        int clause = conflict;
        for (;;) {
            for (int l : clauses_[static_cast<std::size_t>(clause)]) {
                if (l == lit) {
                    continue;
                }
                const auto v = static_cast<std::size_t>(std::abs(l));
                if (seen_[v] || level_[v] == 0) {
                    continue;
                }
                seen_[v] = 1;
                activity_[v] += decay_;
                if (level_[v] == decision_level()) {
                    ++pending;
                } else {
                    learnt.push_back(l);
                }
            }
            do {
                --pos;
            } while (!seen_[static_cast<std::size_t>(std::abs(trail_[pos]))]);
            lit = trail_[pos];
            seen_[static_cast<std::size_t>(std::abs(lit))] = 0;
            if (--pending == 0) {
                break;
            }
            clause = reason_[static_cast<std::size_t>(std::abs(lit))];
        }
        learnt[0] = -lit;
        backjump = 0;
        for (std::size_t k = 1; k < learnt.size(); ++k) {
            const auto v = static_cast<std::size_t>(std::abs(learnt[k]));
            seen_[v] = 0;
            backjump = std::max(backjump, level_[v]);
        }
        if (decay_ > 1e100) {
            for (double& a : activity_) {
                a *= 1e-100;
            }
            decay_ *= 1e-100;
        }
        return learnt;
    }

    int pick() const
    {
        int best = 0;
        double best_activity = -1;
        for (int v = 1; v <= n_; ++v) {
            if (value_[static_cast<std::size_t>(v)] == 0 && activity_[static_cast<std::size_t>(v)] > best_activity) {
                best = v;
                best_activity = activity_[static_cast<std::size_t>(v)];
            }
        }
        return best;
    }

    std::size_t n_;
    std::vector<int> value_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<double> activity_;
    std::vector<char> seen_;
    std::vector<std::vector<int>> occurs_;
    std::vector<std::vector<int>> clauses_;
    std::vector<int> trail_;
    std::vector<std::size_t> marks_;
    std::size_t head_ = 0;
    double decay_ = 1.0;
};

} // namespace

int main(int argc, char** argv)
{
    if (argc != 3) {
        std::cerr << "usage: ref_solver <in.cnf> <out.result>\n";
        return 1;
    }
    std::ifstream in(argv[1]);
    Formula f;
    if (!in || !read_formula(in, f)) {
        std::cerr << "ref_solver: cannot read " << argv[1] << '\n';
        return 1;
    }
    Solver solver(f.vars);
    bool sat = true;
    for (auto& clause : f.clauses) {
        if (!solver.add(std::move(clause))) {
            sat = false;
        }
    }
    sat = sat && solver.solve();
    std::ofstream out(argv[2]);
    if (sat) {
        out << "SAT\n";
        for (int v = 1; v <= f.vars; ++v) {
            out << (solver.val(v) > 0 ? v : -v) << ' ';
        }
        out << "0\n";
    } else {
        out << "UNSAT\n";
    }
    return out ? (sat ? 10 : 20) : 1;
}
