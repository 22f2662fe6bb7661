#include "nbamin/nba.hh"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace nbamin {

Alphabet::Alphabet(unsigned size) : size_(size)
{
    if (size == 0) {
        throw std::invalid_argument("alphabet must contain at least one letter");
    }
}

Nba::Nba(Alphabet alphabet, std::size_t num_states, State start,
         std::vector<State> finals, std::vector<Transition> transitions)
    : alphabet_(alphabet), num_states_(num_states), start_(start),
      finals_(std::move(finals)), transitions_(std::move(transitions))
{
    if (num_states_ == 0) {
        throw std::invalid_argument("automaton needs at least one state");
    }
    if (start_ >= num_states_) {
        throw std::invalid_argument("start state out of range");
    }
    std::sort(finals_.begin(), finals_.end());
    finals_.erase(std::unique(finals_.begin(), finals_.end()), finals_.end());
    is_final_.assign(num_states_, 0);
    for (State q : finals_) {
        if (q >= num_states_) {
            throw std::invalid_argument("final state " + std::to_string(q) + " out of range");
        }
        is_final_[q] = 1;
    }
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());

    const std::size_t slots = num_states_ * alphabet_.size();
    offsets_.assign(slots + 1, 0);
    targets_.reserve(transitions_.size());
    for (const Transition& t : transitions_) {
        if (t.from >= num_states_ || t.to >= num_states_) {
            throw std::invalid_argument("transition endpoint out of range");
        }
        if (!alphabet_.contains(t.letter)) {
            throw std::invalid_argument("transition letter out of range");
        }
        ++offsets_[static_cast<std::size_t>(t.from) * alphabet_.size() + t.letter + 1];
        targets_.push_back(t.to);
    }
    for (std::size_t i = 0; i < slots; ++i) {
        offsets_[i + 1] += offsets_[i];
    }
}

UpWord::UpWord(Word stem_, Word period_) : stem(std::move(stem_)), period(std::move(period_))
{
    if (period.empty()) {
        throw std::invalid_argument("period of an ultimately periodic word must be nonempty");
    }
}

namespace {

std::vector<std::vector<State>> forward_graph(const Nba& a)
{
    std::vector<std::vector<State>> succ(a.num_states());
    for (const Transition& t : a.transitions()) {
        if (succ[t.from].empty() || succ[t.from].back() != t.to) {
            succ[t.from].push_back(t.to);
        }
    }
    for (auto& s : succ) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return succ;
}

std::vector<std::vector<State>> backward_graph(const Nba& a)
{
    std::vector<std::vector<State>> pred(a.num_states());
    for (const Transition& t : a.transitions()) {
        pred[t.to].push_back(t.from);
    }
    for (auto& p : pred) {
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
    }
    return pred;
}

/// Final states that can be revisited: inside a component with a cycle.
std::vector<char> recurrent_finals(const Nba& a, const SccPartition& part)
{
    std::vector<std::uint32_t> size(part.count, 0);
    std::vector<char> cyclic(part.count, 0);
    for (State q = 0; q < a.num_states(); ++q) {
        ++size[part.component[q]];
    }
    for (const Transition& t : a.transitions()) {
        if (t.from == t.to) {
            cyclic[part.component[t.from]] = 1;
        }
    }
    std::vector<char> result(a.num_states(), 0);
    for (State q : a.finals()) {
        const auto c = part.component[q];
        result[q] = (size[c] >= 2 || cyclic[c]) ? 1 : 0;
    }
    return result;
}

} // namespace

SccPartition sccs(const Nba& a)
{
    // Kosaraju: finishing order on the forward graph, then components on the
    // reversed graph in decreasing finishing time.
    const std::size_t n = a.num_states();
    const auto succ = forward_graph(a);
    const auto pred = backward_graph(a);

    std::vector<State> order;
    order.reserve(n);
    std::vector<char> visited(n, 0);
    std::vector<std::pair<State, std::size_t>> stack;
    for (State root = 0; root < n; ++root) {
        if (visited[root]) {
            continue;
        }
        visited[root] = 1;
        stack.emplace_back(root, 0);
        while (!stack.empty()) {
            auto& [q, next] = stack.back();
            if (next < succ[q].size()) {
                const State r = succ[q][next++];
                if (!visited[r]) {
                    visited[r] = 1;
                    stack.emplace_back(r, 0);
                }
            } else {
                order.push_back(q);
                stack.pop_back();
            }
        }
    }

    SccPartition part;
    constexpr auto unassigned = std::numeric_limits<std::uint32_t>::max();
    part.component.assign(n, unassigned);
    std::vector<State> work;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (part.component[*it] != unassigned) {
            continue;
        }
        const std::uint32_t id = part.count++;
        part.component[*it] = id;
        work.push_back(*it);
        while (!work.empty()) {
            const State q = work.back();
            work.pop_back();
            for (State p : pred[q]) {
                if (part.component[p] == unassigned) {
                    part.component[p] = id;
                    work.push_back(p);
                }
            }
        }
    }
    return part;
}

Nba intersect(const Nba& a, const Nba& b)
{
    if (a.alphabet() != b.alphabet()) {
        throw std::invalid_argument("intersect: alphabet mismatch");
    }
    const std::size_t nb = b.num_states();
    const unsigned sigma = a.alphabet_size();
    // Product state (p, q, copy) lives at slot (p * nb + q) * 2 + copy. Copy 0
    // waits for a final state of `a`, copy 1 for a final state of `b`.
    std::vector<State> id(a.num_states() * nb * 2, std::numeric_limits<State>::max());
    std::vector<std::size_t> slot_of;
    std::vector<State> finals;
    std::vector<Transition> transitions;

    auto lookup = [&](State p, State q, unsigned copy) {
        const std::size_t slot = (static_cast<std::size_t>(p) * nb + q) * 2 + copy;
        if (id[slot] == std::numeric_limits<State>::max()) {
            id[slot] = static_cast<State>(slot_of.size());
            slot_of.push_back(slot);
            if (copy == 0 && a.is_final(p)) {
                finals.push_back(id[slot]);
            }
        }
        return id[slot];
    };

    lookup(a.start(), b.start(), 0);
    for (std::size_t cur = 0; cur < slot_of.size(); ++cur) {
        const std::size_t slot = slot_of[cur];
        const unsigned copy = slot % 2;
        const State p = static_cast<State>(slot / 2 / nb);
        const State q = static_cast<State>(slot / 2 % nb);
        unsigned next_copy = copy;
        if (copy == 0 && a.is_final(p)) {
            next_copy = 1;
        } else if (copy == 1 && b.is_final(q)) {
            next_copy = 0;
        }
        for (Letter l = 0; l < sigma; ++l) {
            for (State p2 : a.successors(p, l)) {
                for (State q2 : b.successors(q, l)) {
                    transitions.push_back({static_cast<State>(cur), l, lookup(p2, q2, next_copy)});
                }
            }
        }
    }
    return Nba(a.alphabet(), slot_of.size(), 0, std::move(finals), std::move(transitions));
}

std::vector<char> reachable_states(const Nba& a)
{
    std::vector<char> seen(a.num_states(), 0);
    std::vector<State> work{a.start()};
    seen[a.start()] = 1;
    const auto succ = forward_graph(a);
    while (!work.empty()) {
        const State q = work.back();
        work.pop_back();
        for (State r : succ[q]) {
            if (!seen[r]) {
                seen[r] = 1;
                work.push_back(r);
            }
        }
    }
    return seen;
}

std::vector<char> live_states(const Nba& a)
{
    const auto part = sccs(a);
    auto live = recurrent_finals(a, part);
    const auto pred = backward_graph(a);
    std::vector<State> work;
    for (State q = 0; q < a.num_states(); ++q) {
        if (live[q]) {
            work.push_back(q);
        }
    }
    while (!work.empty()) {
        const State q = work.back();
        work.pop_back();
        for (State p : pred[q]) {
            if (!live[p]) {
                live[p] = 1;
                work.push_back(p);
            }
        }
    }
    return live;
}

bool is_empty(const Nba& a)
{
    return !live_states(a)[a.start()];
}

std::optional<UpWord> find_accepted_word(const Nba& a)
{
    const std::size_t n = a.num_states();
    const unsigned sigma = a.alphabet_size();
    constexpr auto none = std::numeric_limits<std::size_t>::max();

    // Shortest stems by BFS from the start state.
    std::vector<std::size_t> dist(n, none);
    std::vector<std::pair<State, Letter>> parent(n);
    std::deque<State> queue{a.start()};
    dist[a.start()] = 0;
    while (!queue.empty()) {
        const State q = queue.front();
        queue.pop_front();
        for (Letter l = 0; l < sigma; ++l) {
            for (State r : a.successors(q, l)) {
                if (dist[r] == none) {
                    dist[r] = dist[q] + 1;
                    parent[r] = {q, l};
                    queue.push_back(r);
                }
            }
        }
    }

    const auto part = sccs(a);
    const auto knots = recurrent_finals(a, part);
    std::vector<std::uint32_t> comp_size(part.count, 0);
    for (State q = 0; q < n; ++q) {
        ++comp_size[part.component[q]];
    }

    std::vector<State> candidates;
    for (State q = 0; q < n; ++q) {
        if (knots[q] && dist[q] != none) {
            candidates.push_back(q);
        }
    }
    if (candidates.empty()) {
        return std::nullopt;
    }
    std::sort(candidates.begin(), candidates.end(), [&](State x, State y) {
        return std::tuple(dist[x], comp_size[part.component[x]], x) <
               std::tuple(dist[y], comp_size[part.component[y]], y);
    });

    // Shortest cycle through each candidate, restricted to its component.
    std::vector<std::size_t> cdist(n, none);
    std::vector<std::pair<State, Letter>> cparent(n);
    std::vector<State> touched;
    std::size_t best_total = none;
    State best = candidates.front();
    std::vector<Letter> best_period;

    for (State f : candidates) {
        if (best_total != none && dist[f] + 1 >= best_total) {
            break;
        }
        for (State q : touched) {
            cdist[q] = none;
        }
        touched.clear();
        const auto comp = part.component[f];
        std::deque<State> cq{f};
        cdist[f] = 0;
        touched.push_back(f);
        std::optional<std::pair<State, Letter>> closing;
        std::size_t cycle_len = none;
        while (!cq.empty() && !closing) {
            const State q = cq.front();
            cq.pop_front();
            for (Letter l = 0; l < sigma && !closing; ++l) {
                for (State r : a.successors(q, l)) {
                    if (r == f) {
                        closing = std::pair{q, l};
                        cycle_len = cdist[q] + 1;
                        break;
                    }
                    if (part.component[r] == comp && cdist[r] == none) {
                        cdist[r] = cdist[q] + 1;
                        cparent[r] = {q, l};
                        touched.push_back(r);
                        cq.push_back(r);
                    }
                }
            }
        }
        if (!closing) {
            continue;
        }
        const std::size_t total = dist[f] + cycle_len;
        if (best_total == none || total < best_total) {
            best_total = total;
            best = f;
            best_period.clear();
            best_period.push_back(closing->second);
            for (State q = closing->first; q != f; q = cparent[q].first) {
                best_period.push_back(cparent[q].second);
            }
            std::reverse(best_period.begin(), best_period.end());
        }
    }

    Word stem;
    for (State q = best; q != a.start(); q = parent[q].first) {
        stem.push_back(parent[q].second);
    }
    std::reverse(stem.begin(), stem.end());
    return canonicalize(UpWord(std::move(stem), std::move(best_period)));
}

Nba word_automaton(const UpWord& w, Alphabet alphabet)
{
    const std::size_t stem = w.stem.size();
    const std::size_t period = w.period.size();
    if (period == 0) {
        throw std::invalid_argument("word_automaton: empty period");
    }
    std::vector<Transition> transitions;
    std::vector<State> finals;
    auto check = [&](Letter l) {
        if (!alphabet.contains(l)) {
            throw std::invalid_argument("word letter out of alphabet range");
        }
        return l;
    };
    for (std::size_t i = 0; i < stem; ++i) {
        transitions.push_back({static_cast<State>(i), check(w.stem[i]), static_cast<State>(i + 1)});
    }
    for (std::size_t i = 0; i < period; ++i) {
        const State from = static_cast<State>(stem + i);
        const State to = static_cast<State>(i + 1 < period ? stem + i + 1 : stem);
        transitions.push_back({from, check(w.period[i]), to});
        finals.push_back(from);
    }
    return Nba(alphabet, stem + period, 0, std::move(finals), std::move(transitions));
}

bool member(const Nba& a, const UpWord& w)
{
    return !is_empty(intersect(a, word_automaton(w, a.alphabet())));
}

UpWord canonicalize(const UpWord& w)
{
    const std::size_t len = w.period.size();
    if (len == 0) {
        throw std::invalid_argument("canonicalize: empty period");
    }
    std::size_t root = len;
    for (std::size_t p = 1; p < len; ++p) {
        if (len % p != 0) {
            continue;
        }
        bool repeats = true;
        for (std::size_t i = p; i < len && repeats; ++i) {
            repeats = w.period[i] == w.period[i - p];
        }
        if (repeats) {
            root = p;
            break;
        }
    }
    Word stem = w.stem;
    Word period(w.period.begin(), w.period.begin() + static_cast<std::ptrdiff_t>(root));
    // x·l·(y·l)^ω = x·(l·y)^ω
    while (!stem.empty() && stem.back() == period.back()) {
        stem.pop_back();
        std::rotate(period.rbegin(), period.rbegin() + 1, period.rend());
    }
    return UpWord(std::move(stem), std::move(period));
}

Nba universal_nba(Alphabet alphabet)
{
    std::vector<Transition> loops;
    for (Letter l = 0; l < alphabet.size(); ++l) {
        loops.push_back({0, l, 0});
    }
    return Nba(alphabet, 1, 0, {0}, std::move(loops));
}

Nba empty_nba(Alphabet alphabet)
{
    return Nba(alphabet, 1, 0, {}, {});
}

bool is_trim(const Nba& a)
{
    const auto reach = reachable_states(a);
    const auto live = live_states(a);
    for (State q = 0; q < a.num_states(); ++q) {
        if (!reach[q] || !live[q]) {
            return false;
        }
    }
    return true;
}

} // namespace nbamin
