#include "nbamin/census.hh"
#include "nbamin/complement.hh"
#include "nbamin/errors.hh"
#include "nbamin/io.hh"
#include "nbamin/minimizer.hh"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace nbamin;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_partial = 2;

struct SearchFlags {
    std::string solver = "internal";
    double timeout_secs = 600;
    bool no_seed_words = false;
    bool no_symmetry = false;
    bool no_extra_constraints = false;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--solver", solver, "internal or external:<path>")->capture_default_str();
        cmd->add_option("--timeout-secs", timeout_secs, "wall-clock budget per minimization")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        cmd->add_flag("--no-seed-words", no_seed_words, "start from empty example sets");
        cmd->add_flag("--no-symmetry", no_symmetry, "drop the symmetry-breaking clauses");
        cmd->add_flag("--no-extra-constraints", no_extra_constraints,
                      "drop the start-letter constraints");
    }

    MinimizationConfig config() const
    {
        MinimizationConfig cfg;
        cfg.solver = SolverChoice::parse(solver);
        cfg.timeout = std::chrono::duration<double>(timeout_secs);
        cfg.seed_start_words = !no_seed_words;
        cfg.symmetry_breaking = !no_symmetry;
        cfg.extra_knowledge = !no_extra_constraints;
        return cfg;
    }
};

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
}

Certificate read_certificate_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    return parse_certificate(in);
}

extern "C" void on_interrupt(int)
{
    census_stop_flag().store(true);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact minimization of Büchi automata"};
    app.require_subcommand(1);

    // minimize
    auto* minimize_cmd = app.add_subcommand("minimize", "minimal equivalent automaton");
    std::string input;
    std::string out_path;
    std::string cert_path;
    std::string trace_path;
    SearchFlags minimize_flags;
    minimize_cmd->add_option("input", input, "automaton file")->required();
    minimize_cmd->add_option("--out", out_path, "write the automaton here instead of stdout");
    minimize_cmd->add_option("--certificate", cert_path, "write the minimality certificate");
    minimize_cmd->add_option("--trace", trace_path, "write the learner/teacher trace");
    minimize_flags.attach(minimize_cmd);

    // census
    auto* census_cmd = app.add_subcommand("census", "minimize every small automaton and its complement");
    CensusOptions census;
    std::string filter = "final";
    std::string resume_path;
    std::string census_out;
    SearchFlags census_flags;
    census_cmd->add_option("--states", census.states)->required()->check(CLI::Range(1u, 4u));
    census_cmd->add_option("--alphabet", census.alphabet)->required()->check(CLI::Range(1u, 8u));
    census_cmd->add_option("--filter", filter, "raw, final or trim")->capture_default_str();
    census_cmd->add_flag("--verify", census.verify_certificates, "re-check every certificate");
    census_cmd->add_option("--jobs", census.jobs, "worker threads (0: all cores)")->capture_default_str();
    census_cmd->add_option("--checkpoint", census.checkpoint_path, "checkpoint file kept up to date");
    census_cmd->add_option("--resume", resume_path, "continue from this checkpoint");
    census_cmd->add_option("--out", census_out, "write the report here instead of stdout");
    census_flags.attach(census_cmd);

    // complement
    auto* complement_cmd = app.add_subcommand("complement", "complement automaton (unminimized)");
    complement_cmd->add_option("input", input)->required();
    complement_cmd->add_option("--out", out_path);

    // member
    auto* member_cmd = app.add_subcommand("member", "is the word accepted");
    std::string word;
    member_cmd->add_option("input", input)->required();
    member_cmd->add_option("word", word, "stem:period")->required();

    // reduce
    auto* reduce_cmd = app.add_subcommand("reduce", "cheap language-preserving reduction");
    reduce_cmd->add_option("input", input)->required();
    reduce_cmd->add_option("--out", out_path);

    // random
    auto* random_cmd = app.add_subcommand("random", "random trim automaton");
    RandomNbaParams params;
    std::uint64_t seed = 0;
    random_cmd->add_option("--states", params.states)->required()->check(CLI::PositiveNumber);
    random_cmd->add_option("--alphabet", params.alphabet)->required()->check(CLI::PositiveNumber);
    random_cmd->add_option("--seed", seed)->capture_default_str();
    random_cmd->add_option("--p-final", params.p_final)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    random_cmd->add_option("--p-trans", params.p_trans)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    random_cmd->add_option("--out", out_path);

    // verify-certificate
    auto* verify_cmd = app.add_subcommand("verify-certificate", "re-check a minimality certificate");
    std::string verify_solver = "internal";
    double verify_timeout = 600;
    verify_cmd->add_option("input", input)->required();
    verify_cmd->add_option("certificate", cert_path)->required();
    verify_cmd->add_option("--solver", verify_solver)->capture_default_str();
    verify_cmd->add_option("--timeout-secs", verify_timeout)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help is a success; any other usage error is an ordinary error.
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*minimize_cmd) {
            const Nba a = read_nba_file(input);
            const MinimizationResult r = minimize(a, minimize_flags.config());
            write_text(out_path, format_nba(r.automaton));
            if (!cert_path.empty()) {
                write_text(cert_path, format_certificate(r.certificate));
            }
            if (!trace_path.empty()) {
                write_text(trace_path, format_trace(r.trace));
            }
            if (r.status != MinimizationStatus::Minimal) {
                std::cerr << "timeout: at least " << r.certificate.n_min << " states needed, "
                          << r.trace.iterations() << " iterations\n";
                return exit_partial;
            }
            std::cerr << "minimal size " << r.automaton.num_states() << ", " << r.trace.iterations()
                      << " iterations\n";
            return exit_ok;
        }
        if (*census_cmd) {
            census.filter = parse_census_filter(filter);
            census.config = census_flags.config();
            std::vector<CensusEntry> resume;
            if (!resume_path.empty()) {
                resume = load_census_checkpoint(resume_path, census);
                if (census.checkpoint_path.empty()) {
                    census.checkpoint_path = resume_path;
                }
            }
            std::signal(SIGINT, on_interrupt);
            const CensusReport report = census.jobs == 1 ? run_census_serial(census, resume)
                                                         : run_census_parallel(census, resume);
            write_text(census_out, format_census_report(report, census));
            return report.interrupted || report.incomplete > 0 ? exit_partial : exit_ok;
        }
        if (*complement_cmd) {
            write_text(out_path, format_nba(complement_nba(read_nba_file(input))));
            return exit_ok;
        }
        if (*member_cmd) {
            std::cout << (member(read_nba_file(input), parse_word(word)) ? "true" : "false") << '\n';
            return exit_ok;
        }
        if (*reduce_cmd) {
            write_text(out_path, format_nba(reduce(read_nba_file(input))));
            return exit_ok;
        }
        if (*random_cmd) {
            write_text(out_path, format_nba(random_nba(params, seed)));
            return exit_ok;
        }
        if (*verify_cmd) {
            const Nba a = read_nba_file(input);
            const Certificate cert = read_certificate_file(cert_path);
            const auto verdict = verify_certificate(a, cert, SolverChoice::parse(verify_solver),
                                                    Budget::within(std::chrono::duration<double>(verify_timeout)));
            switch (verdict) {
            case CertificateVerdict::Valid: std::cout << "valid\n"; return exit_ok;
            case CertificateVerdict::Invalid: std::cout << "invalid\n"; return exit_error;
            case CertificateVerdict::Indeterminate: std::cout << "indeterminate\n"; return exit_partial;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}
