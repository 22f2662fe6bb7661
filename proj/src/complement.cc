#include "nbamin/complement.hh"
#include "nbamin/errors.hh"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace nbamin {

Dpa::Dpa(Alphabet alphabet, State start, std::vector<State> delta, std::vector<unsigned> priority)
    : alphabet_(alphabet), start_(start), delta_(std::move(delta)), priority_(std::move(priority))
{
    if (priority_.empty() || start_ >= priority_.size()) {
        throw std::invalid_argument("DPA needs a valid start state");
    }
    if (delta_.size() != priority_.size() * alphabet_.size()) {
        throw std::invalid_argument("DPA transition function must be total");
    }
    for (State q : delta_) {
        if (q >= priority_.size()) {
            throw std::invalid_argument("DPA successor out of range");
        }
    }
}

bool dpa_accepts(const Dpa& d, const UpWord& w)
{
    State q = d.start();
    for (Letter a : w.stem) {
        q = d.successor(q, a);
    }
    // Iterate the period until the state at a period boundary repeats.
    std::map<State, std::size_t> seen;
    std::vector<State> boundary;
    while (!seen.contains(q)) {
        seen[q] = boundary.size();
        boundary.push_back(q);
        for (Letter a : w.period) {
            q = d.successor(q, a);
        }
    }
    unsigned lowest = ~0u;
    for (std::size_t i = seen[q]; i < boundary.size(); ++i) {
        State r = boundary[i];
        for (Letter a : w.period) {
            r = d.successor(r, a);
            lowest = std::min(lowest, d.priority(r));
        }
    }
    return lowest % 2 == 0;
}

namespace {

using Bits = std::uint64_t;

struct VectorHash {
    std::size_t operator()(const std::vector<Bits>& v) const
    {
        std::size_t h = v.size();
        for (Bits x : v) {
            h ^= std::hash<Bits>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

/// Flat history tree: labels are bitsets of `words` 64-bit blocks each.
struct FlatTree {
    std::vector<std::uint32_t> parent;
    std::vector<Bits> labels;

    std::size_t size() const { return parent.size(); }
};

class Determinizer {
public:
    Determinizer(const Nba& a, std::size_t limit)
        : nba_(a), limit_(limit), words_((a.num_states() + 63) / 64),
          quiet_priority_(2 * static_cast<unsigned>(a.num_states()) + 1)
    {
        const unsigned sigma = a.alphabet_size();
        post_.assign(a.num_states() * sigma * words_, 0);
        for (const Transition& t : a.transitions()) {
            post_[(t.from * sigma + t.letter) * words_ + t.to / 64] |= Bits{1} << (t.to % 64);
        }
        finals_.assign(words_, 0);
        for (State q : a.finals()) {
            finals_[q / 64] |= Bits{1} << (q % 64);
        }
    }

    Determinization run()
    {
        const unsigned sigma = nba_.alphabet_size();
        FlatTree initial;
        initial.parent.push_back(0);
        initial.labels.assign(words_, 0);
        initial.labels[nba_.start() / 64] |= Bits{1} << (nba_.start() % 64);

        // Each DPA state is (tree, priority of the step that entered it).
        std::vector<std::pair<std::uint32_t, unsigned>> states;
        std::unordered_map<std::vector<Bits>, State, VectorHash> state_ids;
        std::vector<State> delta;

        auto dpa_state = [&](std::uint32_t tree, unsigned prio) {
            std::vector<Bits> key{tree, prio};
            auto [it, inserted] = state_ids.emplace(std::move(key), static_cast<State>(states.size()));
            if (inserted) {
                if (states.size() >= limit_) {
                    throw DeterminizationLimit(limit_);
                }
                states.emplace_back(tree, prio);
            }
            return it->second;
        };

        dpa_state(tree_id(initial), quiet_priority_);
        for (std::size_t cur = 0; cur < states.size(); ++cur) {
            const std::uint32_t tree = states[cur].first;
            for (Letter a = 0; a < sigma; ++a) {
                const auto [next, prio] = tree_step(tree, a);
                delta.push_back(dpa_state(next, prio));
            }
        }

        std::vector<unsigned> priority;
        std::vector<HistoryTree> trees;
        for (const auto& [tree, prio] : states) {
            priority.push_back(prio);
            trees.push_back(export_tree(trees_[tree]));
        }
        return {Dpa(nba_.alphabet(), 0, std::move(delta), std::move(priority)), std::move(trees)};
    }

private:
    const Bits* post(State q, Letter a) const
    {
        return &post_[(q * nba_.alphabet_size() + a) * words_];
    }

    std::uint32_t tree_id(const FlatTree& t)
    {
        std::vector<Bits> key;
        key.reserve(1 + t.size() + t.labels.size());
        key.push_back(t.size());
        key.insert(key.end(), t.parent.begin(), t.parent.end());
        key.insert(key.end(), t.labels.begin(), t.labels.end());
        auto [it, inserted] = tree_ids_.emplace(std::move(key), static_cast<std::uint32_t>(trees_.size()));
        if (inserted) {
            trees_.push_back(t);
            step_cache_.emplace_back();
        }
        return it->second;
    }

    std::pair<std::uint32_t, unsigned> tree_step(std::uint32_t id, Letter a)
    {
        auto& cache = step_cache_[id];
        if (cache.empty()) {
            cache.assign(nba_.alphabet_size(), {~0u, 0});
        }
        if (cache[a].first == ~0u) {
            FlatTree next;
            const unsigned prio = successor(trees_[id], a, next);
            const std::uint32_t next_id = tree_id(next);
            step_cache_[id][a] = {next_id, prio};
        }
        return step_cache_[id][a];
    }

    bool empty_label(const std::vector<Bits>& labels, std::size_t node) const
    {
        for (std::size_t w = 0; w < words_; ++w) {
            if (labels[node * words_ + w] != 0) {
                return false;
            }
        }
        return true;
    }

    void horizontal_merge(std::vector<Bits>& labels,
                          const std::vector<std::vector<std::uint32_t>>& children,
                          std::uint32_t node, std::vector<Bits> forbidden) const
    {
        for (std::size_t w = 0; w < words_; ++w) {
            labels[node * words_ + w] &= ~forbidden[w];
        }
        for (std::uint32_t child : children[node]) {
            horizontal_merge(labels, children, child, forbidden);
            for (std::size_t w = 0; w < words_; ++w) {
                forbidden[w] |= labels[child * words_ + w];
            }
        }
    }

    /// One Safra step on `tree` reading `a`; writes the compacted successor
    /// tree and returns the priority of the step.
    unsigned successor(const FlatTree& tree, Letter a, FlatTree& out) const
    {
        const std::size_t old_size = tree.size();
        if (old_size == 0) {
            return quiet_priority_;
        }
        std::vector<std::uint32_t> parent = tree.parent;
        std::vector<Bits> labels = tree.labels;

        // A fresh youngest child for the final part of every label.
        for (std::uint32_t k = 0; k < old_size; ++k) {
            std::vector<Bits> accepting(words_);
            bool any = false;
            for (std::size_t w = 0; w < words_; ++w) {
                accepting[w] = labels[k * words_ + w] & finals_[w];
                any = any || accepting[w] != 0;
            }
            if (any) {
                parent.push_back(k);
                labels.insert(labels.end(), accepting.begin(), accepting.end());
            }
        }
        const std::size_t size = parent.size();

        // Subset step on every label.
        std::vector<Bits> moved(size * words_, 0);
        for (std::size_t k = 0; k < size; ++k) {
            Bits* dst = &moved[k * words_];
            for (std::size_t w = 0; w < words_; ++w) {
                for (Bits bits = labels[k * words_ + w]; bits != 0; bits &= bits - 1) {
                    const State q = static_cast<State>(w * 64 + std::countr_zero(bits));
                    const Bits* src = post(q, a);
                    for (std::size_t v = 0; v < words_; ++v) {
                        dst[v] |= src[v];
                    }
                }
            }
        }
        labels = std::move(moved);

        std::vector<std::vector<std::uint32_t>> children(size);
        for (std::uint32_t k = 1; k < size; ++k) {
            children[parent[k]].push_back(k);
        }
        horizontal_merge(labels, children, 0, std::vector<Bits>(words_, 0));

        std::vector<char> removed(size, 0);
        for (std::size_t k = 0; k < size; ++k) {
            removed[k] = empty_label(labels, k);
        }

        // Vertical merge: a node whose children cover its label turns green
        // and loses its subtree.
        std::vector<char> green(size, 0);
        for (std::uint32_t k = 0; k < size; ++k) {
            if (removed[k]) {
                continue;
            }
            std::vector<Bits> cover(words_, 0);
            bool has_child = false;
            for (std::uint32_t c : children[k]) {
                if (removed[c]) {
                    continue;
                }
                has_child = true;
                for (std::size_t w = 0; w < words_; ++w) {
                    cover[w] |= labels[c * words_ + w];
                }
            }
            if (!has_child) {
                continue;
            }
            bool covered = true;
            for (std::size_t w = 0; w < words_ && covered; ++w) {
                covered = cover[w] == labels[k * words_ + w];
            }
            if (covered) {
                green[k] = 1;
                std::vector<std::uint32_t> stack(children[k].begin(), children[k].end());
                while (!stack.empty()) {
                    const std::uint32_t d = stack.back();
                    stack.pop_back();
                    removed[d] = 1;
                    stack.insert(stack.end(), children[d].begin(), children[d].end());
                }
            }
        }

        // Only nodes that existed before the step count as removed; green
        // nodes always existed before.
        unsigned prio = quiet_priority_;
        for (std::uint32_t k = 0; k < old_size; ++k) {
            // Removal of node k outranks it turning green.
            if (green[k]) {
                prio = 2 * k + 2;
                break;
            }
            if (removed[k]) {
                prio = 2 * k + 1;
                break;
            }
        }

        std::vector<std::uint32_t> rename(size, 0);
        std::uint32_t next = 0;
        for (std::uint32_t k = 0; k < size; ++k) {
            if (!removed[k]) {
                rename[k] = next++;
                out.parent.push_back(k == 0 ? 0 : rename[parent[k]]);
                out.labels.insert(out.labels.end(), labels.begin() + k * words_,
                                  labels.begin() + (k + 1) * words_);
            }
        }
        return prio;
    }

    HistoryTree export_tree(const FlatTree& t) const
    {
        HistoryTree h;
        h.parent = t.parent;
        for (std::size_t k = 0; k < t.size(); ++k) {
            std::vector<State> label;
            for (std::size_t w = 0; w < words_; ++w) {
                for (Bits bits = t.labels[k * words_ + w]; bits != 0; bits &= bits - 1) {
                    label.push_back(static_cast<State>(w * 64 + std::countr_zero(bits)));
                }
            }
            h.label.push_back(std::move(label));
        }
        return h;
    }

    const Nba& nba_;
    std::size_t limit_;
    std::size_t words_;
    unsigned quiet_priority_;
    std::vector<Bits> post_;
    std::vector<Bits> finals_;
    std::vector<FlatTree> trees_;
    std::unordered_map<std::vector<Bits>, std::uint32_t, VectorHash> tree_ids_;
    std::vector<std::vector<std::pair<std::uint32_t, unsigned>>> step_cache_;
};

} // namespace

Determinization determinize(const Nba& a, std::size_t limit)
{
    return Determinizer(a, limit).run();
}

Dpa nba_to_dpa(const Nba& a, std::size_t limit)
{
    return determinize(a, limit).dpa;
}

Dpa complement_dpa(const Dpa& d)
{
    std::vector<unsigned> shifted = d.priorities();
    for (unsigned& p : shifted) {
        ++p;
    }
    return Dpa(d.alphabet(), d.start(), d.delta(), std::move(shifted));
}

Nba dpa_to_nba(const Dpa& d)
{
    const unsigned sigma = d.alphabet().size();
    std::vector<unsigned> evens;
    for (unsigned p : d.priorities()) {
        if (p % 2 == 0) {
            evens.push_back(p);
        }
    }
    std::sort(evens.begin(), evens.end());
    evens.erase(std::unique(evens.begin(), evens.end()), evens.end());

    // Slot 0 of each DPA state is the waiting copy, slot i+1 commits to evens[i].
    const std::size_t copies = evens.size() + 1;
    std::vector<State> id(d.num_states() * copies, ~State{0});
    std::vector<std::pair<State, std::size_t>> nodes;
    std::vector<State> finals;
    std::vector<Transition> transitions;

    auto lookup = [&](State q, std::size_t copy) {
        State& slot = id[q * copies + copy];
        if (slot == ~State{0}) {
            slot = static_cast<State>(nodes.size());
            nodes.emplace_back(q, copy);
            if (copy > 0 && d.priority(q) == evens[copy - 1]) {
                finals.push_back(slot);
            }
        }
        return slot;
    };

    lookup(d.start(), 0);
    for (std::size_t cur = 0; cur < nodes.size(); ++cur) {
        const auto [q, copy] = nodes[cur];
        for (Letter a = 0; a < sigma; ++a) {
            const State r = d.successor(q, a);
            if (copy == 0) {
                transitions.push_back({static_cast<State>(cur), a, lookup(r, 0)});
                for (std::size_t i = 0; i < evens.size(); ++i) {
                    if (d.priority(r) >= evens[i]) {
                        transitions.push_back({static_cast<State>(cur), a, lookup(r, i + 1)});
                    }
                }
            } else if (d.priority(r) >= evens[copy - 1]) {
                transitions.push_back({static_cast<State>(cur), a, lookup(r, copy)});
            }
        }
    }
    return Nba(d.alphabet(), nodes.size(), 0, std::move(finals), std::move(transitions));
}

Nba complement_nba(const Nba& a, std::size_t limit)
{
    return reduce(dpa_to_nba(complement_dpa(nba_to_dpa(reduce(a), limit))));
}

} // namespace nbamin
