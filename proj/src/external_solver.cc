#include "nbamin/errors.hh"
#include "nbamin/sat.hh"

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace nbamin {

namespace {

std::filesystem::path scratch_file(const std::string& suffix)
{
    static std::atomic<unsigned> counter{0};
    std::ostringstream name;
    name << "nbamin-" << ::getpid() << '-' << std::this_thread::get_id() << '-' << counter++ << suffix;
    return std::filesystem::temp_directory_path() / name.str();
}

struct ScratchFiles {
    std::filesystem::path cnf = scratch_file(".cnf");
    std::filesystem::path result = scratch_file(".result");
    ~ScratchFiles()
    {
        std::error_code ignored;
        std::filesystem::remove(cnf, ignored);
        std::filesystem::remove(result, ignored);
    }
};

SolveResult parse_result(std::istream& in, const Cnf& cnf)
{
    SolveResult result;
    std::string status;
    if (!(in >> status)) {
        throw ExternalSolverError(ExternalSolverError::Kind::Unparsable, "empty solver result file");
    }
    if (status == "UNSAT") {
        result.status = SolveStatus::Unsat;
        return result;
    }
    if (status != "SAT") {
        throw ExternalSolverError(ExternalSolverError::Kind::Unparsable,
                                  "unexpected solver status '" + status + "'");
    }
    result.status = SolveStatus::Sat;
    result.model.assign(static_cast<std::size_t>(cnf.num_vars) + 1, false);
    std::string token;
    bool terminated = false;
    while (in >> token) {
        long l = 0;
        try {
            std::size_t used = 0;
            l = std::stol(token, &used);
            if (used != token.size()) {
                throw std::invalid_argument(token);
            }
        } catch (const std::exception&) {
            throw ExternalSolverError(ExternalSolverError::Kind::Unparsable,
                                      "bad model literal '" + token + "'");
        }
        if (l == 0) {
            terminated = true;
            break;
        }
        const long v = l < 0 ? -l : l;
        if (v > cnf.num_vars) {
            throw ExternalSolverError(ExternalSolverError::Kind::Unparsable,
                                      "model literal out of range");
        }
        result.model[static_cast<std::size_t>(v)] = l > 0;
    }
    if (!terminated) {
        throw ExternalSolverError(ExternalSolverError::Kind::Unparsable, "model not terminated by 0");
    }
    if (!satisfies(cnf, result.model)) {
        throw ExternalSolverError(ExternalSolverError::Kind::BadModel,
                                  "external solver model violates the CNF");
    }
    return result;
}

} // namespace

SolveResult external_solve(const Cnf& cnf, const std::string& solver_path, const Budget& budget)
{
    ScratchFiles files;
    {
        std::ofstream out(files.cnf);
        write_dimacs(out, cnf);
        if (!out) {
            throw ExternalSolverError(ExternalSolverError::Kind::ProcessFailure,
                                      "cannot write " + files.cnf.string());
        }
    }
    const std::string in_arg = files.cnf.string();
    const std::string out_arg = files.result.string();
    std::vector<char*> argv{const_cast<char*>(solver_path.c_str()), const_cast<char*>(in_arg.c_str()),
                            const_cast<char*>(out_arg.c_str()), nullptr};
    pid_t pid = 0;
    if (::posix_spawn(&pid, solver_path.c_str(), nullptr, nullptr, argv.data(), environ) != 0) {
        throw ExternalSolverError(ExternalSolverError::Kind::ProcessFailure,
                                  "cannot start " + solver_path);
    }

    int status = 0;
    for (;;) {
        const pid_t done = ::waitpid(pid, &status, WNOHANG);
        if (done == pid) {
            break;
        }
        if (done < 0) {
            throw ExternalSolverError(ExternalSolverError::Kind::ProcessFailure, "waitpid failed");
        }
        if (budget.deadline && std::chrono::steady_clock::now() >= *budget.deadline) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            SolveResult timeout;
            timeout.status = SolveStatus::Timeout;
            return timeout;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    // MiniSat-style solvers report 10 (SAT) and 20 (UNSAT).
    if (!WIFEXITED(status) ||
        (WEXITSTATUS(status) != 0 && WEXITSTATUS(status) != 10 && WEXITSTATUS(status) != 20)) {
        throw ExternalSolverError(ExternalSolverError::Kind::ProcessFailure,
                                  solver_path + " terminated abnormally");
    }
    std::ifstream in(files.result);
    if (!in) {
        throw ExternalSolverError(ExternalSolverError::Kind::ProcessFailure,
                                  solver_path + " wrote no result file");
    }
    return parse_result(in, cnf);
}

SolverChoice SolverChoice::parse(const std::string& spec)
{
    if (spec == "internal") {
        return {};
    }
    const std::string prefix = "external:";
    if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size()) {
        return {spec.substr(prefix.size())};
    }
    throw std::invalid_argument("solver must be 'internal' or 'external:<path>'");
}

SolveResult solve_with(const SolverChoice& choice, const Cnf& cnf, const Budget& budget)
{
    if (choice.is_external()) {
        return external_solve(cnf, choice.external_path, budget);
    }
    return solve(cnf, budget);
}

} // namespace nbamin
