#include "oracles.hh"

#include "nbamin/census.hh"
#include "nbamin/errors.hh"

#include <doctest.h>

#include <filesystem>

using namespace nbamin;

namespace {

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("nbamin-census-" + name)).string();
}

std::uint64_t histogram_total(const std::map<std::size_t, std::uint64_t>& h)
{
    std::uint64_t total = 0;
    for (const auto& [size, count] : h) {
        total += count;
    }
    return total;
}

bool same_entries(const std::vector<CensusEntry>& a, const std::vector<CensusEntry>& b)
{
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].index != b[k].index || a[k].minimal_size != b[k].minimal_size ||
            a[k].complement_size != b[k].complement_size || a[k].complete != b[k].complete ||
            a[k].verified != b[k].verified) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("enumeration space and filters")
{
    CHECK(census_space(2, 2) == 1024);
    CHECK(census_space(2, 3) == 16384);
    CHECK_THROWS_AS(census_space(0, 2), std::invalid_argument);
    CHECK_THROWS_AS(census_space(7, 2), std::invalid_argument);

    CensusOptions o;
    CHECK(census_indices(o).size() == 768);
    o.alphabet = 3;
    CHECK(census_indices(o).size() == 12288);
    o.alphabet = 2;
    o.filter = CensusFilter::Raw;
    CHECK(census_indices(o).size() == 1024);

    // The trim filter against an independent count.
    o.filter = CensusFilter::Trim;
    std::size_t trim = 0;
    oracle::any_automaton(2, 2, [&](const Nba& a) {
        const auto words = oracle::bounded_words(2, 2, 2);
        bool every_state_useful = true;
        for (State q = 0; q < a.num_states(); ++q) {
            // Re-root at q and look for an accepted short word; also require
            // q to be reachable from 0.
            const Nba from_q(a.alphabet(), a.num_states(), q, a.finals(), a.transitions());
            const bool live = std::any_of(words.begin(), words.end(),
                                          [&](const UpWord& w) { return oracle::accepts(from_q, w); });
            bool reach = q == 0;
            for (const Transition& t : a.transitions()) {
                reach = reach || (t.from == 0 && t.to == q);
            }
            every_state_useful = every_state_useful && live && reach;
        }
        trim += every_state_useful;
        return false;
    });
    CHECK(census_indices(o).size() == trim);
}

TEST_CASE("index layout")
{
    // Bit 0: state 0 final; then transitions ordered (i, a, j).
    const Nba a = census_automaton(0b10'0000'0001, 2, 2);
    CHECK(a.finals() == std::vector<State>{0});
    CHECK(a.transitions() == std::vector<Transition>{{1, 1, 1}});
    const Nba b = census_automaton(0b0000'0000'0110, 2, 2);
    CHECK(b.finals() == std::vector<State>{1});
    CHECK(b.transitions() == std::vector<Transition>{{0, 0, 0}});
}

TEST_CASE("filter names")
{
    for (CensusFilter f : {CensusFilter::Raw, CensusFilter::AtLeastOneFinal, CensusFilter::Trim}) {
        CHECK(parse_census_filter(census_filter_name(f)) == f);
    }
    CHECK_THROWS_AS(parse_census_filter("all"), std::invalid_argument);
}

TEST_CASE("serial and parallel runs agree")
{
    CensusOptions o;
    o.states = 1;
    o.alphabet = 3;
    o.verify_certificates = true;
    const CensusReport s = run_census_serial(o);
    o.jobs = 4;
    const CensusReport p = run_census_parallel(o);
    CHECK(s.total == 8);
    CHECK(same_entries(s.entries, p.entries));
    CHECK(s.minimal_sizes == p.minimal_sizes);
    CHECK(s.complement_sizes == p.complement_sizes);
    CHECK(histogram_total(s.minimal_sizes) == s.total);
    CHECK(histogram_total(s.complement_sizes) == s.total);
    CHECK(s.unverified == 0);
    CHECK_FALSE(s.interrupted);
    CHECK(format_census_report(s, o) == format_census_report(p, o));
}

TEST_CASE("one state, one letter")
{
    CensusOptions o;
    o.states = 1;
    o.alphabet = 1;
    const CensusReport r = run_census_serial(o);
    CHECK(r.total == 2);
    CHECK(histogram_total(r.minimal_sizes) == r.total);
    CHECK(histogram_total(r.complement_sizes) == r.total);
    CHECK(r.minimal_sizes.at(1) == 2);
}

TEST_CASE("checkpoint round trip and resume")
{
    CensusOptions o;
    o.states = 1;
    o.alphabet = 2;
    o.checkpoint_path = temp_path("a.json");
    o.checkpoint_every = 1;
    const CensusReport full = run_census_serial(o);
    const auto saved = load_census_checkpoint(o.checkpoint_path, o);
    CHECK(same_entries(saved, full.entries));

    // Resume from the first half only.
    std::vector<CensusEntry> half(saved.begin(), saved.begin() + static_cast<std::ptrdiff_t>(saved.size() / 2));
    const CensusReport resumed = run_census_parallel(o, half);
    CHECK(same_entries(resumed.entries, full.entries));

    CensusOptions other = o;
    other.alphabet = 3;
    CHECK_THROWS_AS(load_census_checkpoint(o.checkpoint_path, other), ParseError);
    CHECK_THROWS_AS(load_census_checkpoint(temp_path("missing.json"), o), ParseError);
    std::filesystem::remove(o.checkpoint_path);
}

TEST_CASE("stop flag interrupts and leaves a resumable checkpoint")
{
    CensusOptions o;
    o.states = 1;
    o.alphabet = 2;
    o.checkpoint_path = temp_path("b.json");
    census_stop_flag().store(true);
    const CensusReport stopped = run_census_serial(o);
    census_stop_flag().store(false);
    CHECK(stopped.interrupted);
    CHECK(stopped.entries.empty());
    CHECK(format_census_report(stopped, o).find("interrupted") != std::string::npos);
    const CensusReport finished = run_census_serial(o, load_census_checkpoint(o.checkpoint_path, o));
    CHECK_FALSE(finished.interrupted);
    CHECK(finished.entries.size() == finished.total);
    std::filesystem::remove(o.checkpoint_path);
}
