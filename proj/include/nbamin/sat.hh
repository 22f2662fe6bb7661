#ifndef NBAMIN_SAT_HH
#define NBAMIN_SAT_HH

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nbamin {

using Lit = int;
using Clause = std::vector<Lit>;

/// Clauses over variables 1..num_vars; a literal's sign is its polarity.
struct Cnf {
    int num_vars = 0;
    std::vector<Clause> clauses;

    int new_var() { return ++num_vars; }
    void add_clause(Clause clause);
    bool operator==(const Cnf&) const = default;
};

/// Total assignment; index 0 is unused.
using Model = std::vector<bool>;

bool satisfies(const Cnf& cnf, const Model& model);

struct Budget {
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::optional<std::uint64_t> max_conflicts;

    static Budget within(std::chrono::duration<double> d)
    {
        return {std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(d),
                std::nullopt};
    }
};

enum class SolveStatus { Sat, Unsat, Timeout };

struct SolverStats {
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Timeout;
    Model model;
    SolverStats stats;
};

/// Embedded CDCL solver: two watched literals, VSIDS, phase saving,
/// first-UIP learning with clause minimization, Luby restarts.
/// Deterministic for a given CNF and seed.
SolveResult solve(const Cnf& cnf, const Budget& budget = {}, std::uint64_t seed = 0);

std::string write_dimacs(const Cnf& cnf);
void write_dimacs(std::ostream& out, const Cnf& cnf);
Cnf read_dimacs(std::istream& in);

/// Runs `<solver_path> <in.cnf> <out.result>` and parses the result file
/// (`SAT` + model literals ending in 0, or `UNSAT`). The model is checked
/// against the CNF before it is returned.
SolveResult external_solve(const Cnf& cnf, const std::string& solver_path, const Budget& budget = {});

/// Which backend answers SAT queries.
struct SolverChoice {
    std::string external_path; // empty: embedded solver

    bool is_external() const { return !external_path.empty(); }
    static SolverChoice parse(const std::string& spec);
};

SolveResult solve_with(const SolverChoice& choice, const Cnf& cnf, const Budget& budget = {});

} // namespace nbamin

#endif
