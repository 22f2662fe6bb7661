#ifndef NBAMIN_NBA_HH
#define NBAMIN_NBA_HH

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace nbamin {

using State = std::uint32_t;
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

/// Letters are 0..size()-1.
class Alphabet {
public:
    explicit Alphabet(unsigned size);
    unsigned size() const { return size_; }
    bool contains(Letter a) const { return a < size_; }
    bool operator==(const Alphabet&) const = default;

private:
    unsigned size_;
};

struct Transition {
    State from;
    Letter letter;
    State to;
    auto operator<=>(const Transition&) const = default;
};

/// Nondeterministic Büchi automaton with state-based acceptance.
///
/// Transitions are kept sorted by (from, letter, to) without duplicates, so two
/// automata with the same structure compare equal and iterate identically.
class Nba {
public:
    Nba(Alphabet alphabet, std::size_t num_states, State start,
        std::vector<State> finals, std::vector<Transition> transitions);

    const Alphabet& alphabet() const { return alphabet_; }
    unsigned alphabet_size() const { return alphabet_.size(); }
    std::size_t num_states() const { return num_states_; }
    State start() const { return start_; }
    const std::vector<State>& finals() const { return finals_; }
    bool is_final(State q) const { return is_final_[q] != 0; }
    const std::vector<Transition>& transitions() const { return transitions_; }

    std::span<const State> successors(State q, Letter a) const
    {
        const std::size_t slot = static_cast<std::size_t>(q) * alphabet_.size() + a;
        return {targets_.data() + offsets_[slot], targets_.data() + offsets_[slot + 1]};
    }

    bool operator==(const Nba& other) const
    {
        return alphabet_ == other.alphabet_ && num_states_ == other.num_states_ &&
               start_ == other.start_ && finals_ == other.finals_ &&
               transitions_ == other.transitions_;
    }

private:
    Alphabet alphabet_;
    std::size_t num_states_;
    State start_;
    std::vector<State> finals_;
    std::vector<char> is_final_;
    std::vector<Transition> transitions_;
    std::vector<std::size_t> offsets_;
    std::vector<State> targets_;
};

/// Ultimately periodic word stem·period^ω.
struct UpWord {
    Word stem;
    Word period;

    UpWord() = default;
    UpWord(Word stem_, Word period_);
    auto operator<=>(const UpWord&) const = default;
};

/// Strongly connected components, numbered in a topological order of the
/// condensation (a component only reaches components with larger ids).
struct SccPartition {
    std::vector<std::uint32_t> component;
    std::uint32_t count = 0;
};

SccPartition sccs(const Nba& a);

/// Two-copy Büchi product; only reachable product states are built.
Nba intersect(const Nba& a, const Nba& b);

bool is_empty(const Nba& a);
std::optional<UpWord> find_accepted_word(const Nba& a);
bool member(const Nba& a, const UpWord& w);
Nba word_automaton(const UpWord& w, Alphabet alphabet);
UpWord canonicalize(const UpWord& w);

/// One state, final, self-loop on every letter.
Nba universal_nba(Alphabet alphabet);
/// One state, not final, no transitions.
Nba empty_nba(Alphabet alphabet);

std::vector<char> reachable_states(const Nba& a);
/// States from which some word is accepted.
std::vector<char> live_states(const Nba& a);

/// Language-preserving size reduction: unreachable and dead states are
/// dropped, a greatest set of universal final states is merged into one sink,
/// and transitions competing with an edge into that sink are pruned.
Nba reduce(const Nba& a);

/// Keeps the given states (start must be kept), renumbering in index order.
Nba restrict_states(const Nba& a, const std::vector<char>& keep);

struct RandomNbaParams {
    std::size_t states = 10;
    unsigned alphabet = 2;
    double p_final = 0.5;
    double p_trans = 0.15;
};

/// One unfiltered sample: each state final with p_final, each (i, a, j)
/// present with p_trans, start 0.
Nba sample_nba(const RandomNbaParams& params, std::mt19937_64& rng);

/// All states reachable and every state can still accept some word.
bool is_trim(const Nba& a);

/// Samples until a trim automaton comes up. Throws std::runtime_error after
/// max_attempts rejected samples.
Nba random_nba(const RandomNbaParams& params, std::uint64_t seed,
               std::size_t max_attempts = 1'000'000);

} // namespace nbamin

#endif
