#ifndef NBAMIN_CENSUS_HH
#define NBAMIN_CENSUS_HH

#include "nbamin/minimizer.hh"
#include "nbamin/nba.hh"

#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nbamin {

/// Which automata of the exhaustive enumeration take part.
enum class CensusFilter {
    Raw,             // every final set and transition set
    AtLeastOneFinal, // default
    Trim,            // all states reachable and able to accept
};

struct CensusOptions {
    unsigned states = 2;
    unsigned alphabet = 2;
    CensusFilter filter = CensusFilter::AtLeastOneFinal;
    MinimizationConfig config;
    /// Also check both certificates of every entry.
    bool verify_certificates = false;
    /// Worker threads for run_census_parallel; 0 uses the OpenMP default.
    unsigned jobs = 0;
    /// Written every `checkpoint_every` finished entries and at the end.
    std::string checkpoint_path;
    std::size_t checkpoint_every = 64;
};

struct CensusEntry {
    std::uint64_t index = 0;
    std::size_t minimal_size = 0;
    std::size_t complement_size = 0;
    bool complete = false; // both minimizations finished
    bool verified = false; // only meaningful with verify_certificates
};

struct CensusReport {
    std::uint64_t total = 0; // automata passing the filter
    std::vector<CensusEntry> entries; // sorted by index
    std::map<std::size_t, std::uint64_t> minimal_sizes;
    std::map<std::size_t, std::uint64_t> complement_sizes;
    std::size_t max_complement = 0;
    std::uint64_t incomplete = 0;
    std::uint64_t unverified = 0;
    bool interrupted = false;
};

/// Number of raw enumeration indices: 2^states * 2^(states^2 * alphabet).
std::uint64_t census_space(unsigned states, unsigned alphabet);

/// Raw index -> automaton. The low `states` bits select final states, the
/// remaining bits the transitions (i, a, j) in lexicographic order. Start is 0.
Nba census_automaton(std::uint64_t index, unsigned states, unsigned alphabet);

bool census_filter_accepts(const Nba& a, CensusFilter filter);

/// Filtered indices in increasing order.
std::vector<std::uint64_t> census_indices(const CensusOptions& opts);

/// Minimizes one automaton and its complement.
CensusEntry census_entry(std::uint64_t index, const CensusOptions& opts);

/// Reference implementation: one entry after another. Entries in `resume`
/// are taken over without recomputation.
CensusReport run_census_serial(const CensusOptions& opts, const std::vector<CensusEntry>& resume = {});

/// Same result as the serial version with entries computed by an OpenMP team.
CensusReport run_census_parallel(const CensusOptions& opts, const std::vector<CensusEntry>& resume = {});

/// Set (e.g. from a signal handler) to stop a running census; finished
/// entries are kept and the report is marked interrupted.
std::atomic<bool>& census_stop_flag();

void save_census_checkpoint(const std::string& path, const CensusOptions& opts,
                            const std::vector<CensusEntry>& entries);
std::vector<CensusEntry> load_census_checkpoint(const std::string& path, const CensusOptions& opts);

std::string format_census_report(const CensusReport& report, const CensusOptions& opts);
std::string census_filter_name(CensusFilter f);
CensusFilter parse_census_filter(const std::string& name);

} // namespace nbamin

#endif
