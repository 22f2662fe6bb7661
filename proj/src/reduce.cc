#include "nbamin/nba.hh"

#include <algorithm>
#include <stdexcept>

namespace nbamin {

Nba restrict_states(const Nba& a, const std::vector<char>& keep)
{
    if (!keep[a.start()]) {
        throw std::invalid_argument("restrict_states: start state must be kept");
    }
    std::vector<State> index(a.num_states(), 0);
    State next = 0;
    for (State q = 0; q < a.num_states(); ++q) {
        if (keep[q]) {
            index[q] = next++;
        }
    }
    std::vector<State> finals;
    for (State q : a.finals()) {
        if (keep[q]) {
            finals.push_back(index[q]);
        }
    }
    std::vector<Transition> transitions;
    for (const Transition& t : a.transitions()) {
        if (keep[t.from] && keep[t.to]) {
            transitions.push_back({index[t.from], t.letter, index[t.to]});
        }
    }
    return Nba(a.alphabet(), next, index[a.start()], std::move(finals), std::move(transitions));
}

namespace {

Nba drop_unreachable(const Nba& a)
{
    return restrict_states(a, reachable_states(a));
}

Nba drop_dead(const Nba& a)
{
    const auto live = live_states(a);
    if (!live[a.start()]) {
        return empty_nba(a.alphabet());
    }
    return restrict_states(a, live);
}

/// Greatest S ⊆ F where every state of S has, for every letter, a successor in S.
std::vector<char> universal_finals(const Nba& a)
{
    std::vector<char> in(a.num_states(), 0);
    for (State q : a.finals()) {
        in[q] = 1;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (State q = 0; q < a.num_states(); ++q) {
            if (!in[q]) {
                continue;
            }
            for (Letter l = 0; l < a.alphabet_size(); ++l) {
                const auto succ = a.successors(q, l);
                if (std::none_of(succ.begin(), succ.end(), [&](State r) { return in[r] != 0; })) {
                    in[q] = 0;
                    changed = true;
                    break;
                }
            }
        }
    }
    return in;
}

Nba merge_universal(const Nba& a)
{
    const auto universal = universal_finals(a);
    auto first = std::find(universal.begin(), universal.end(), 1);
    if (first == universal.end()) {
        return a;
    }
    const State sink = static_cast<State>(first - universal.begin());
    auto rep = [&](State q) { return universal[q] ? sink : q; };

    std::vector<Transition> transitions;
    for (const Transition& t : a.transitions()) {
        if (!universal[t.from]) {
            transitions.push_back({t.from, t.letter, rep(t.to)});
        }
    }
    for (Letter l = 0; l < a.alphabet_size(); ++l) {
        transitions.push_back({sink, l, sink});
    }
    // Any other successor on a letter that can also reach the sink is redundant.
    std::sort(transitions.begin(), transitions.end());
    std::vector<Transition> pruned;
    for (const Transition& t : transitions) {
        const bool sink_edge = std::binary_search(transitions.begin(), transitions.end(),
                                                  Transition{t.from, t.letter, sink});
        if (!sink_edge || t.to == sink) {
            pruned.push_back(t);
        }
    }
    std::vector<State> finals;
    for (State q : a.finals()) {
        finals.push_back(rep(q));
    }
    Nba merged(a.alphabet(), a.num_states(), rep(a.start()), std::move(finals), std::move(pruned));
    std::vector<char> keep(a.num_states(), 1);
    for (State q = 0; q < a.num_states(); ++q) {
        if (universal[q] && q != sink) {
            keep[q] = 0;
        }
    }
    return restrict_states(merged, keep);
}

} // namespace

Nba reduce(const Nba& a)
{
    Nba current = a;
    for (;;) {
        Nba next = merge_universal(drop_dead(drop_unreachable(current)));
        if (next == current) {
            return next;
        }
        current = std::move(next);
    }
}

} // namespace nbamin
