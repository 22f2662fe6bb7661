#include "nbamin/errors.hh"
#include "nbamin/sat.hh"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace nbamin;

namespace {

Cnf random_3sat(int vars, int clauses, std::mt19937_64& rng)
{
    Cnf cnf;
    cnf.num_vars = vars;
    std::uniform_int_distribution<int> var(1, vars);
    std::bernoulli_distribution sign(0.5);
    for (int c = 0; c < clauses; ++c) {
        Clause cl;
        for (int k = 0; k < 3; ++k) {
            cl.push_back(sign(rng) ? var(rng) : -var(rng));
        }
        cnf.add_clause(cl);
    }
    return cnf;
}

bool brute_force_sat(const Cnf& cnf)
{
    for (std::uint32_t bits = 0; bits < (1u << cnf.num_vars); ++bits) {
        Model m(static_cast<std::size_t>(cnf.num_vars) + 1, false);
        for (int v = 1; v <= cnf.num_vars; ++v) {
            m[static_cast<std::size_t>(v)] = bits >> (v - 1) & 1;
        }
        if (satisfies(cnf, m)) {
            return true;
        }
    }
    return false;
}

/// Pigeons p into holes h: variable p * holes + h + 1.
Cnf pigeonhole(int holes)
{
    const int pigeons = holes + 1;
    Cnf cnf;
    cnf.num_vars = pigeons * holes;
    auto x = [&](int p, int h) { return p * holes + h + 1; };
    for (int p = 0; p < pigeons; ++p) {
        Clause some;
        for (int h = 0; h < holes; ++h) {
            some.push_back(x(p, h));
        }
        cnf.add_clause(some);
    }
    for (int h = 0; h < holes; ++h) {
        for (int p = 0; p < pigeons; ++p) {
            for (int q = p + 1; q < pigeons; ++q) {
                cnf.add_clause({-x(p, h), -x(q, h)});
            }
        }
    }
    return cnf;
}

std::string fake_solver(const std::string& name, const std::string& body)
{
    const auto path = std::filesystem::temp_directory_path() / ("nbamin-test-" + name + ".sh");
    std::ofstream out(path);
    out << "#!/bin/sh\n" << body << '\n';
    out.close();
    std::filesystem::permissions(path, std::filesystem::perms::owner_all);
    return path.string();
}

} // namespace

TEST_CASE("cnf validation")
{
    Cnf cnf;
    const int v = cnf.new_var();
    CHECK(v == 1);
    CHECK_THROWS_AS(cnf.add_clause({}), std::invalid_argument);
    CHECK_THROWS_AS(cnf.add_clause({0}), std::invalid_argument);
    CHECK_THROWS_AS(cnf.add_clause({2}), std::invalid_argument);
    cnf.add_clause({-1});
    CHECK(satisfies(cnf, {false, false}));
    CHECK_FALSE(satisfies(cnf, {false, true}));
    CHECK_FALSE(satisfies(cnf, {false}));
}

TEST_CASE("cdcl agrees with exhaustive search on random 3-sat")
{
    std::mt19937_64 rng(41);
    int sat = 0;
    for (int k = 0; k < 300; ++k) {
        const int vars = 4 + k % 9;
        const Cnf cnf = random_3sat(vars, static_cast<int>(4.26 * vars), rng);
        const SolveResult r = solve(cnf, {}, static_cast<std::uint64_t>(k));
        REQUIRE(r.status != SolveStatus::Timeout);
        REQUIRE((r.status == SolveStatus::Sat) == brute_force_sat(cnf));
        if (r.status == SolveStatus::Sat) {
            REQUIRE(satisfies(cnf, r.model));
            ++sat;
        }
    }
    // Near the threshold both outcomes must show up.
    CHECK(sat > 30);
    CHECK(sat < 270);
}

TEST_CASE("pigeonhole is unsatisfiable")
{
    for (int holes = 1; holes <= 6; ++holes) {
        const SolveResult r = solve(pigeonhole(holes));
        CHECK(r.status == SolveStatus::Unsat);
    }
}

TEST_CASE("budget stops the search")
{
    const Cnf hard = pigeonhole(9);
    Budget b;
    b.max_conflicts = 10;
    const SolveResult r = solve(hard, b);
    CHECK(r.status == SolveStatus::Timeout);
    CHECK(r.stats.conflicts <= 11);

    const SolveResult late = solve(hard, Budget::within(std::chrono::milliseconds(0)));
    CHECK(late.status == SolveStatus::Timeout);
}

TEST_CASE("formula without clauses")
{
    Cnf cnf;
    cnf.num_vars = 3;
    const SolveResult r = solve(cnf);
    CHECK(r.status == SolveStatus::Sat);
    CHECK(r.model.size() == 4);
}

TEST_CASE("dimacs round trip and strict parsing")
{
    std::mt19937_64 rng(42);
    const Cnf cnf = random_3sat(10, 30, rng);
    std::istringstream in(write_dimacs(cnf));
    CHECK(read_dimacs(in) == cnf);
    CHECK(write_dimacs(pigeonhole(1)) == "p cnf 2 3\n1 0\n2 0\n-1 -2 0\n");

    for (const char* bad : {"", "p cnf 2 1\n1 3 0\n", "p cnf 2 2\n1 0\n", "p dnf 1 1\n1 0\n",
                            "1 0\np cnf 1 1\n", "p cnf 1 1\n1 x 0\n", "p cnf 1 1\n1\n"}) {
        std::istringstream text(bad);
        CHECK_THROWS_AS(read_dimacs(text), ParseError);
    }
    std::istringstream commented("c hello\np cnf 2 1\nc mid\n1 -2\n0\n");
    const Cnf parsed = read_dimacs(commented);
    CHECK(parsed.clauses == std::vector<Clause>{{1, -2}});
}

TEST_CASE("solver choice parsing")
{
    CHECK_FALSE(SolverChoice::parse("internal").is_external());
    CHECK(SolverChoice::parse("external:/bin/x").external_path == "/bin/x");
    CHECK_THROWS_AS(SolverChoice::parse("external:"), std::invalid_argument);
    CHECK_THROWS_AS(SolverChoice::parse("minisat"), std::invalid_argument);
}

TEST_CASE("external reference solver agrees with the embedded one")
{
    std::mt19937_64 rng(43);
    for (int k = 0; k < 40; ++k) {
        const Cnf cnf = random_3sat(30, 128, rng);
        const SolveResult inner = solve(cnf);
        const SolveResult outer = external_solve(cnf, REF_SOLVER);
        REQUIRE(inner.status == outer.status);
        if (outer.status == SolveStatus::Sat) {
            REQUIRE(satisfies(cnf, outer.model));
        }
    }
    CHECK(external_solve(pigeonhole(5), REF_SOLVER).status == SolveStatus::Unsat);
    CHECK(solve_with(SolverChoice::parse(std::string("external:") + REF_SOLVER), pigeonhole(3)).status ==
          SolveStatus::Unsat);
}

TEST_CASE("external solver failures are reported")
{
    const Cnf cnf = pigeonhole(2);
    auto kind_of = [&](const std::string& path) {
        try {
            external_solve(cnf, path);
        } catch (const ExternalSolverError& e) {
            return static_cast<int>(e.kind());
        }
        return -1;
    };
    using K = ExternalSolverError::Kind;
    CHECK(kind_of("/nonexistent/solver") == static_cast<int>(K::ProcessFailure));
    CHECK(kind_of(fake_solver("crash", "exit 3")) == static_cast<int>(K::ProcessFailure));
    CHECK(kind_of(fake_solver("garbage", "echo MAYBE > \"$2\"; exit 0")) == static_cast<int>(K::Unparsable));
    CHECK(kind_of(fake_solver("liar", "echo 'SAT 1 2 3 4 5 6 0' > \"$2\"; exit 10")) ==
          static_cast<int>(K::BadModel));
    const auto unsat = fake_solver("unsat", "echo UNSAT > \"$2\"; exit 20");
    CHECK(external_solve(cnf, unsat).status == SolveStatus::Unsat);

    const auto slow = fake_solver("slow", "sleep 30");
    const auto started = std::chrono::steady_clock::now();
    CHECK(external_solve(cnf, slow, Budget::within(std::chrono::milliseconds(200))).status ==
          SolveStatus::Timeout);
    CHECK(std::chrono::steady_clock::now() - started < std::chrono::seconds(10));
}
