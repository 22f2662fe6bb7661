#ifndef NBAMIN_MINIMIZER_HH
#define NBAMIN_MINIMIZER_HH

#include "nbamin/complement.hh"
#include "nbamin/encoding.hh"
#include "nbamin/nba.hh"
#include "nbamin/sat.hh"

#include <chrono>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace nbamin {

struct MinimizationConfig {
    SolverChoice solver;
    std::chrono::duration<double> timeout = std::chrono::seconds(600);
    bool seed_start_words = true;
    bool symmetry_breaking = true;
    bool extra_knowledge = true;
    bool bad_words_first = true;
    /// Give up (status Bounded) once candidates would need more states.
    std::optional<std::size_t> max_states;
    std::size_t determinization_limit = default_determinization_limit;
    /// Called after every candidate query that the solver answered.
    std::function<void(const CandidateQuery&, const std::optional<Nba>&)> on_query;
};

/// Final example sets plus the claimed minimal size: the sets are classified
/// correctly by the input, and no automaton with n_min - 1 states separates them.
struct Certificate {
    SampleSets samples;
    std::size_t n_min = 1;
    bool operator==(const Certificate&) const = default;
};

struct TraceEvent {
    enum class Kind {
        SeedGood,     // word
        SeedBad,      // word
        Candidate,    // states, SAT statistics
        AddBad,       // word
        AddGood,      // word
        Grow,         // states: the new candidate size after UNSAT
        Finished,     // states: the final size
    };
    Kind kind;
    std::size_t states = 0;
    std::optional<UpWord> word;
    SolverStats stats;
};

struct Trace {
    std::vector<TraceEvent> events;

    /// Number of candidates proposed by the SAT search.
    std::size_t iterations() const;
    /// Rebuilds the example sets and the current size from the events.
    Certificate replay() const;
};

enum class MinimizationStatus {
    Minimal, // automaton is a minimal equivalent
    Timeout, // lower bound only
    Bounded, // max_states reached; lower bound only
};

struct MinimizationResult {
    MinimizationStatus status = MinimizationStatus::Minimal;
    /// Minimal equivalent automaton, or the reduced input when the run stopped early.
    Nba automaton;
    /// On early stops n_min is the proven lower bound.
    Certificate certificate;
    Trace trace;
};

/// a^ω, ab^ω, (ab)^ω, a(ab)^ω for letters a != b, and (01...σ-1)^ω;
/// canonical and without duplicates, in that order.
std::vector<UpWord> seed_candidates(Alphabet alphabet);
SampleSets seed_words(const Nba& a);

struct Equal {};
struct BadWord {
    UpWord word; // accepted by the candidate, rejected by the input
};
struct GoodWord {
    UpWord word; // accepted by the input, rejected by the candidate
};
using CheckResult = std::variant<Equal, BadWord, GoodWord>;

/// Equivalence query. `complement` must recognise the complement of `a`.
CheckResult check_candidate(const Nba& a, const Nba& complement, const Nba& candidate,
                            bool bad_words_first = true,
                            std::size_t determinization_limit = default_determinization_limit);

/// Learner/teacher loop. `known_complement`, if given, must recognise the
/// complement of `a`; otherwise it is computed once up front.
MinimizationResult minimize(const Nba& a, const MinimizationConfig& cfg = {},
                            const Nba* known_complement = nullptr);

enum class CertificateVerdict { Valid, Invalid, Indeterminate };

CertificateVerdict verify_certificate(const Nba& a, const Certificate& cert, const SolverChoice& solver = {},
                                      const Budget& budget = {});

} // namespace nbamin

#endif
