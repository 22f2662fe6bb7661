#include "oracles.hh"

#include "nbamin/complement.hh"
#include "nbamin/errors.hh"
#include "nbamin/io.hh"

#include <doctest.h>

#include <set>

using namespace nbamin;

namespace {

std::vector<Nba> random_family(std::size_t count, std::size_t max_states, std::uint64_t seed)
{
    std::vector<Nba> out;
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < count; ++k) {
        RandomNbaParams p;
        p.states = 1 + k % max_states;
        p.p_trans = 0.3;
        out.push_back(sample_nba(p, rng));
    }
    return out;
}

/// States reachable from the start on the finite word.
std::set<State> subset_after(const Nba& a, const Word& w)
{
    std::set<State> cur{a.start()};
    for (Letter l : w) {
        std::set<State> next;
        for (const Transition& t : a.transitions()) {
            if (t.letter == l && cur.contains(t.from)) {
                next.insert(t.to);
            }
        }
        cur = next;
    }
    return cur;
}

} // namespace

TEST_CASE("a node dying and turning green in alternation does not accept")
{
    // The node named 1 alternately dies and turns green on 1(10)^w; no run
    // visits a final state infinitely often.
    const Nba a(Alphabet(2), 4, 0, {0, 1}, {{0, 1, 0}, {0, 1, 2}, {1, 0, 0}, {2, 1, 1}, {2, 1, 3}, {3, 0, 2}, {3, 1, 2}});
    const UpWord w({1}, {1, 0});
    REQUIRE_FALSE(oracle::accepts(a, w));
    CHECK_FALSE(dpa_accepts(nba_to_dpa(a), w));
    CHECK(member(complement_nba(a), w));
}

TEST_CASE("dpa validation")
{
    CHECK_NOTHROW(Dpa(Alphabet(2), 0, {0, 0}, {0}));
    CHECK_THROWS_AS(Dpa(Alphabet(2), 0, {0}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(Dpa(Alphabet(2), 1, {0, 0}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(Dpa(Alphabet(2), 0, {0, 1}, {0}), std::invalid_argument);
}

TEST_CASE("determinization agrees with the nba on bounded words")
{
    const auto words = oracle::bounded_words(2);
    for (const Nba& a : random_family(120, 5, 31)) {
        const Dpa d = nba_to_dpa(a);
        CAPTURE(format_nba(a));
        for (const UpWord& w : words) {
            const bool expected = oracle::accepts(a, w);
            REQUIRE(oracle::dpa_run_accepts(d, w) == expected);
            REQUIRE(dpa_accepts(d, w) == expected);
        }
    }
}

TEST_CASE("history trees track the subset construction and stay well formed")
{
    const auto prefixes = oracle::bounded_words(2, 0, 4);
    for (const Nba& a : random_family(40, 5, 32)) {
        const Determinization det = determinize(a);
        REQUIRE(det.trees.size() == det.dpa.num_states());
        for (const HistoryTree& t : det.trees) {
            REQUIRE(t.parent.size() == t.label.size());
            for (std::size_t v = 1; v < t.parent.size(); ++v) {
                // Parents precede children; labels are nonempty and strictly
                // inside the parent's.
                REQUIRE(t.parent[v] < v);
                const auto& mine = t.label[v];
                const auto& up = t.label[t.parent[v]];
                REQUIRE_FALSE(mine.empty());
                REQUIRE(std::includes(up.begin(), up.end(), mine.begin(), mine.end()));
                REQUIRE(mine.size() < up.size());
                for (std::size_t s = v + 1; s < t.parent.size(); ++s) {
                    if (t.parent[s] == t.parent[v]) {
                        std::vector<State> both;
                        std::set_intersection(mine.begin(), mine.end(), t.label[s].begin(), t.label[s].end(),
                                              std::back_inserter(both));
                        REQUIRE(both.empty());
                    }
                }
            }
        }
        for (const UpWord& p : prefixes) {
            State q = det.dpa.start();
            for (Letter l : p.period) {
                q = det.dpa.successor(q, l);
            }
            const auto expected = subset_after(a, p.period);
            // The empty subset is the tree without nodes.
            const auto& tree = det.trees[q].label;
            const std::set<State> root = tree.empty() ? std::set<State>{} : std::set<State>(tree[0].begin(), tree[0].end());
            REQUIRE(root == expected);
        }
    }
}

TEST_CASE("parity complement flips every verdict")
{
    const auto words = oracle::bounded_words(2, 2, 3);
    for (const Nba& a : random_family(40, 4, 33)) {
        const Dpa d = nba_to_dpa(a);
        const Dpa c = complement_dpa(d);
        CHECK(c.delta() == d.delta());
        for (const UpWord& w : words) {
            REQUIRE(oracle::dpa_run_accepts(c, w) != oracle::dpa_run_accepts(d, w));
        }
    }
}

TEST_CASE("parity to buchi keeps the language")
{
    const auto words = oracle::bounded_words(2, 2, 3);
    for (const Nba& a : random_family(40, 4, 34)) {
        const Dpa d = complement_dpa(nba_to_dpa(a));
        const Nba b = dpa_to_nba(d);
        for (const UpWord& w : words) {
            REQUIRE(oracle::accepts(b, w) == oracle::dpa_run_accepts(d, w));
        }
    }
}

TEST_CASE("complement is disjoint and covering")
{
    const auto words = oracle::bounded_words(2);
    for (const Nba& a : random_family(100, 6, 35)) {
        const Nba c = complement_nba(a);
        CAPTURE(format_nba(a));
        REQUIRE(is_empty(intersect(a, c)));
        for (const UpWord& w : words) {
            REQUIRE(oracle::accepts(a, w) != oracle::accepts(c, w));
        }
    }
}

TEST_CASE("complements of the corner languages")
{
    CHECK(reduce(complement_nba(universal_nba(Alphabet(2)))) == empty_nba(Alphabet(2)));
    // Universal, though not in the single-state form reduce can detect.
    const Nba all = complement_nba(empty_nba(Alphabet(3)));
    for (const UpWord& w : oracle::bounded_words(3, 2, 2)) {
        CHECK(oracle::accepts(all, w));
    }
    const Nba c = complement_nba(read_nba_file(DATA_DIR "/finite_ones.nba"));
    CHECK(member(c, UpWord({}, {0, 1})));
    CHECK_FALSE(member(c, UpWord({1}, {0})));
}

TEST_CASE("determinization limit")
{
    const Nba m2 = read_nba_file(DATA_DIR "/michel2.nba");
    CHECK_THROWS_AS(nba_to_dpa(m2, 3), DeterminizationLimit);
    try {
        complement_nba(m2, 3);
        FAIL("expected DeterminizationLimit");
    } catch (const DeterminizationLimit& e) {
        CHECK(e.limit() == 3);
    }
}
