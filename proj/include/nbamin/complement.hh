#ifndef NBAMIN_COMPLEMENT_HH
#define NBAMIN_COMPLEMENT_HH

#include "nbamin/nba.hh"

#include <cstddef>
#include <vector>

namespace nbamin {

/// Deterministic, complete parity automaton with priorities on states.
/// A run is accepting iff the least priority seen infinitely often is even.
class Dpa {
public:
    Dpa(Alphabet alphabet, State start, std::vector<State> delta, std::vector<unsigned> priority);

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t num_states() const { return priority_.size(); }
    State start() const { return start_; }
    State successor(State q, Letter a) const { return delta_[q * alphabet_.size() + a]; }
    unsigned priority(State q) const { return priority_[q]; }
    const std::vector<unsigned>& priorities() const { return priority_; }
    const std::vector<State>& delta() const { return delta_; }

private:
    Alphabet alphabet_;
    State start_;
    std::vector<State> delta_;
    std::vector<unsigned> priority_;
};

/// Runs the deterministic automaton on stem·period^ω.
bool dpa_accepts(const Dpa& d, const UpWord& w);

/// One reachable determinization state: node names are indices, node 0 is the
/// root, parents have smaller names than children and older siblings smaller
/// names than younger ones.
struct HistoryTree {
    std::vector<std::uint32_t> parent; // parent[0] is unused
    std::vector<std::vector<State>> label;
};

struct Determinization {
    Dpa dpa;
    /// Tree of each DPA state (before the priority component is attached).
    std::vector<HistoryTree> trees;
};

inline constexpr std::size_t default_determinization_limit = 100000;

/// Safra's construction with Piterman's compact naming. Throws
/// DeterminizationLimit if more than `limit` DPA states are needed.
Dpa nba_to_dpa(const Nba& a, std::size_t limit = default_determinization_limit);
Determinization determinize(const Nba& a, std::size_t limit = default_determinization_limit);

/// Shifts every priority by one.
Dpa complement_dpa(const Dpa& d);

/// Waiting copy plus one committed copy per even priority p; committed copies
/// only pass through states of priority >= p and accept on priority exactly p.
Nba dpa_to_nba(const Dpa& d);

/// NBA -> DPA -> complemented DPA -> NBA, reduced.
Nba complement_nba(const Nba& a, std::size_t limit = default_determinization_limit);

} // namespace nbamin

#endif
