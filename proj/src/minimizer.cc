#include "nbamin/minimizer.hh"
#include "nbamin/errors.hh"

#include <algorithm>
#include <stdexcept>

namespace nbamin {

std::size_t Trace::iterations() const
{
    return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [](const TraceEvent& e) {
        return e.kind == TraceEvent::Kind::Candidate;
    }));
}

Certificate Trace::replay() const
{
    Certificate cert;
    for (const TraceEvent& e : events) {
        switch (e.kind) {
        case TraceEvent::Kind::SeedGood:
        case TraceEvent::Kind::AddGood: cert.samples.add_good(*e.word); break;
        case TraceEvent::Kind::SeedBad:
        case TraceEvent::Kind::AddBad: cert.samples.add_bad(*e.word); break;
        case TraceEvent::Kind::Grow:
        case TraceEvent::Kind::Finished: cert.n_min = e.states; break;
        case TraceEvent::Kind::Candidate: break;
        }
    }
    return cert;
}

std::vector<UpWord> seed_candidates(Alphabet alphabet)
{
    const unsigned sigma = alphabet.size();
    std::vector<UpWord> raw;
    for (Letter a = 0; a < sigma; ++a) {
        raw.emplace_back(Word{}, Word{a});
    }
    for (Letter a = 0; a < sigma; ++a) {
        for (Letter b = 0; b < sigma; ++b) {
            if (a != b) {
                raw.emplace_back(Word{a}, Word{b});
            }
        }
    }
    for (Letter a = 0; a < sigma; ++a) {
        for (Letter b = 0; b < sigma; ++b) {
            if (a != b) {
                raw.emplace_back(Word{}, Word{a, b});
            }
        }
    }
    for (Letter a = 0; a < sigma; ++a) {
        for (Letter b = 0; b < sigma; ++b) {
            if (a != b) {
                raw.emplace_back(Word{a}, Word{a, b});
            }
        }
    }
    Word all(sigma);
    for (Letter a = 0; a < sigma; ++a) {
        all[a] = a;
    }
    raw.emplace_back(Word{}, all);

    std::vector<UpWord> words;
    for (const UpWord& w : raw) {
        UpWord c = canonicalize(w);
        if (std::find(words.begin(), words.end(), c) == words.end()) {
            words.push_back(std::move(c));
        }
    }
    return words;
}

SampleSets seed_words(const Nba& a)
{
    SampleSets samples;
    for (const UpWord& w : seed_candidates(a.alphabet())) {
        if (member(a, w)) {
            samples.add_good(w);
        } else {
            samples.add_bad(w);
        }
    }
    return samples;
}

CheckResult check_candidate(const Nba& a, const Nba& complement, const Nba& candidate,
                            bool bad_words_first, std::size_t determinization_limit)
{
    auto bad_word = [&]() -> std::optional<UpWord> {
        return find_accepted_word(intersect(candidate, complement));
    };
    auto good_word = [&]() -> std::optional<UpWord> {
        return find_accepted_word(intersect(a, complement_nba(candidate, determinization_limit)));
    };
    if (bad_words_first) {
        if (auto w = bad_word()) {
            return BadWord{std::move(*w)};
        }
        if (auto w = good_word()) {
            return GoodWord{std::move(*w)};
        }
    } else {
        if (auto w = good_word()) {
            return GoodWord{std::move(*w)};
        }
        if (auto w = bad_word()) {
            return BadWord{std::move(*w)};
        }
    }
    return Equal{};
}

namespace {

/// Letters on which no accepted word can start. Only meaningful for trim automata.
std::vector<Letter> dead_start_letters(const Nba& a)
{
    std::vector<Letter> letters;
    if (a.finals().empty()) {
        return letters;
    }
    for (Letter l = 0; l < a.alphabet_size(); ++l) {
        if (a.successors(a.start(), l).empty()) {
            letters.push_back(l);
        }
    }
    return letters;
}

} // namespace

MinimizationResult minimize(const Nba& a, const MinimizationConfig& cfg, const Nba* known_complement)
{
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(cfg.timeout);
    const Budget budget{deadline, std::nullopt};

    const Nba reduced = reduce(a);
    const Nba complement = known_complement ? reduce(*known_complement)
                                            : complement_nba(reduced, cfg.determinization_limit);

    MinimizationResult result{MinimizationStatus::Minimal, reduced, {}, {}};
    auto& trace = result.trace.events;
    SampleSets samples;
    if (cfg.seed_start_words) {
        for (const UpWord& w : seed_candidates(a.alphabet())) {
            const bool good = member(reduced, w);
            if (good) {
                samples.add_good(w);
            } else {
                samples.add_bad(w);
            }
            trace.push_back({good ? TraceEvent::Kind::SeedGood : TraceEvent::Kind::SeedBad, 0, w, {}});
        }
    }

    CandidateOptions options;
    options.symmetry_breaking = cfg.symmetry_breaking;
    if (cfg.extra_knowledge) {
        options.forbidden_start_letters = dead_start_letters(reduced);
    }

    auto add_counterexample = [&](const CheckResult& check) {
        if (const auto* bad = std::get_if<BadWord>(&check)) {
            samples.add_bad(bad->word);
            trace.push_back({TraceEvent::Kind::AddBad, 0, bad->word, {}});
        } else if (const auto* good = std::get_if<GoodWord>(&check)) {
            samples.add_good(good->word);
            trace.push_back({TraceEvent::Kind::AddGood, 0, good->word, {}});
        }
    };

    std::size_t n = 1;
    for (;;) {
        if (n >= reduced.num_states()) {
            // Nothing smaller separates the samples, so the reduced input is minimal.
            result.automaton = reduced;
            break;
        }
        if (cfg.max_states && n > *cfg.max_states) {
            result.status = MinimizationStatus::Bounded;
            break;
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            result.status = MinimizationStatus::Timeout;
            break;
        }
        std::optional<Nba> candidate;
        SolverStats stats;
        try {
            const CandidateQuery query(n, a.alphabet(), samples, options);
            candidate = solve_candidate(query, cfg.solver, budget, &stats);
            if (cfg.on_query) {
                cfg.on_query(query, candidate);
            }
        } catch (const SolverTimeout&) {
            result.status = MinimizationStatus::Timeout;
            break;
        }
        if (!candidate) {
            ++n;
            trace.push_back({TraceEvent::Kind::Grow, n, std::nullopt, stats});
            continue;
        }
        trace.push_back({TraceEvent::Kind::Candidate, n, std::nullopt, stats});
        const CheckResult check =
            check_candidate(reduced, complement, *candidate, cfg.bad_words_first, cfg.determinization_limit);
        if (std::holds_alternative<Equal>(check)) {
            result.automaton = std::move(*candidate);
            break;
        }
        add_counterexample(check);
    }

    // The start-letter constraint is not expressible by example words. Make
    // sure the final samples alone rule out n - 1 states.
    if (result.status == MinimizationStatus::Minimal && !options.forbidden_start_letters.empty() && n > 1) {
        for (;;) {
            std::optional<Nba> smaller;
            try {
                const CandidateQuery query(n - 1, a.alphabet(), samples);
                smaller = solve_candidate(query, cfg.solver, budget);
                if (cfg.on_query) {
                    cfg.on_query(query, smaller);
                }
            } catch (const SolverTimeout&) {
                result.status = MinimizationStatus::Timeout;
                result.automaton = reduced;
                break;
            }
            if (!smaller) {
                break;
            }
            trace.push_back({TraceEvent::Kind::Candidate, n - 1, std::nullopt, {}});
            const CheckResult check =
                check_candidate(reduced, complement, *smaller, cfg.bad_words_first, cfg.determinization_limit);
            if (std::holds_alternative<Equal>(check)) {
                throw std::logic_error("smaller equivalent automaton excluded by start-letter constraint");
            }
            add_counterexample(check);
        }
    }

    if (result.status != MinimizationStatus::Minimal) {
        result.automaton = reduced;
    }
    trace.push_back({TraceEvent::Kind::Finished, n, std::nullopt, {}});
    result.certificate = {samples, n};
    return result;
}

CertificateVerdict verify_certificate(const Nba& a, const Certificate& cert, const SolverChoice& solver,
                                      const Budget& budget)
{
    for (const UpWord& w : cert.samples.good()) {
        if (!member(a, w)) {
            return CertificateVerdict::Invalid;
        }
    }
    for (const UpWord& w : cert.samples.bad()) {
        if (member(a, w)) {
            return CertificateVerdict::Invalid;
        }
    }
    if (cert.n_min <= 1) {
        return CertificateVerdict::Valid;
    }
    try {
        const auto smaller = solve_candidate(CandidateQuery(cert.n_min - 1, a.alphabet(), cert.samples), solver, budget);
        return smaller ? CertificateVerdict::Invalid : CertificateVerdict::Valid;
    } catch (const SolverTimeout&) {
        return CertificateVerdict::Indeterminate;
    }
}

} // namespace nbamin
