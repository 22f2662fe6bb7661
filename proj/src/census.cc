#include "nbamin/census.hh"
#include "nbamin/complement.hh"
#include "nbamin/errors.hh"

#include <json.hpp>

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <omp.h>

namespace nbamin {

std::uint64_t census_space(unsigned states, unsigned alphabet)
{
    const unsigned bits = states + states * states * alphabet;
    if (states == 0 || alphabet == 0 || bits >= 63) {
        throw std::invalid_argument("census size out of range");
    }
    return std::uint64_t{1} << bits;
}

Nba census_automaton(std::uint64_t index, unsigned states, unsigned alphabet)
{
    std::vector<State> finals;
    for (State q = 0; q < states; ++q) {
        if (index >> q & 1) {
            finals.push_back(q);
        }
    }
    std::vector<Transition> transitions;
    unsigned bit = states;
    for (State i = 0; i < states; ++i) {
        for (Letter a = 0; a < alphabet; ++a) {
            for (State j = 0; j < states; ++j, ++bit) {
                if (index >> bit & 1) {
                    transitions.push_back({i, a, j});
                }
            }
        }
    }
    return Nba(Alphabet(alphabet), states, 0, std::move(finals), std::move(transitions));
}

bool census_filter_accepts(const Nba& a, CensusFilter filter)
{
    switch (filter) {
    case CensusFilter::Raw: return true;
    case CensusFilter::AtLeastOneFinal: return !a.finals().empty();
    case CensusFilter::Trim: return is_trim(a);
    }
    return false;
}

std::vector<std::uint64_t> census_indices(const CensusOptions& opts)
{
    std::vector<std::uint64_t> indices;
    const std::uint64_t space = census_space(opts.states, opts.alphabet);
    for (std::uint64_t i = 0; i < space; ++i) {
        if (opts.filter == CensusFilter::AtLeastOneFinal) {
            if ((i & ((std::uint64_t{1} << opts.states) - 1)) != 0) {
                indices.push_back(i);
            }
        } else if (census_filter_accepts(census_automaton(i, opts.states, opts.alphabet), opts.filter)) {
            indices.push_back(i);
        }
    }
    return indices;
}

CensusEntry census_entry(std::uint64_t index, const CensusOptions& opts)
{
    CensusEntry entry;
    entry.index = index;
    const Nba a = census_automaton(index, opts.states, opts.alphabet);
    const MinimizationResult direct = minimize(a, opts.config);
    const Nba complement = complement_nba(a, opts.config.determinization_limit);
    const MinimizationResult inverse = minimize(complement, opts.config, &a);
    entry.minimal_size = direct.certificate.n_min;
    entry.complement_size = inverse.certificate.n_min;
    entry.complete = direct.status == MinimizationStatus::Minimal &&
                     inverse.status == MinimizationStatus::Minimal;
    if (opts.verify_certificates && entry.complete) {
        entry.verified = verify_certificate(a, direct.certificate, opts.config.solver) == CertificateVerdict::Valid &&
                         verify_certificate(complement, inverse.certificate, opts.config.solver) ==
                             CertificateVerdict::Valid;
    }
    return entry;
}

std::atomic<bool>& census_stop_flag()
{
    static std::atomic<bool> flag{false};
    return flag;
}

namespace {

CensusReport summarize(const CensusOptions& opts, std::uint64_t total, std::vector<CensusEntry> entries,
                       bool interrupted)
{
    std::sort(entries.begin(), entries.end(),
              [](const CensusEntry& x, const CensusEntry& y) { return x.index < y.index; });
    CensusReport report;
    report.total = total;
    report.interrupted = interrupted;
    for (const CensusEntry& e : entries) {
        if (!e.complete) {
            ++report.incomplete;
            continue;
        }
        ++report.minimal_sizes[e.minimal_size];
        ++report.complement_sizes[e.complement_size];
        report.max_complement = std::max(report.max_complement, e.complement_size);
        if (opts.verify_certificates && !e.verified) {
            ++report.unverified;
        }
    }
    report.entries = std::move(entries);
    return report;
}

/// Indices still to compute, given entries carried over from a checkpoint.
std::vector<std::uint64_t> pending(const std::vector<std::uint64_t>& all, const std::vector<CensusEntry>& resume)
{
    std::vector<std::uint64_t> done;
    for (const CensusEntry& e : resume) {
        done.push_back(e.index);
    }
    std::sort(done.begin(), done.end());
    std::vector<std::uint64_t> todo;
    for (std::uint64_t i : all) {
        if (!std::binary_search(done.begin(), done.end(), i)) {
            todo.push_back(i);
        }
    }
    return todo;
}

} // namespace

CensusReport run_census_serial(const CensusOptions& opts, const std::vector<CensusEntry>& resume)
{
    const auto all = census_indices(opts);
    std::vector<CensusEntry> entries = resume;
    bool interrupted = false;
    std::size_t since_checkpoint = 0;
    for (std::uint64_t index : pending(all, resume)) {
        if (census_stop_flag().load()) {
            interrupted = true;
            break;
        }
        entries.push_back(census_entry(index, opts));
        if (!opts.checkpoint_path.empty() && ++since_checkpoint >= opts.checkpoint_every) {
            save_census_checkpoint(opts.checkpoint_path, opts, entries);
            since_checkpoint = 0;
        }
    }
    if (!opts.checkpoint_path.empty()) {
        save_census_checkpoint(opts.checkpoint_path, opts, entries);
    }
    return summarize(opts, all.size(), std::move(entries), interrupted);
}

CensusReport run_census_parallel(const CensusOptions& opts, const std::vector<CensusEntry>& resume)
{
    const auto all = census_indices(opts);
    const auto todo = pending(all, resume);
    std::vector<CensusEntry> entries = resume;
    std::vector<char> done(todo.size(), 0);
    std::mutex aggregate;
    std::exception_ptr failure;
    std::size_t since_checkpoint = 0;
    const int threads = opts.jobs > 0 ? static_cast<int>(opts.jobs) : omp_get_max_threads();
    const auto count = static_cast<std::int64_t>(todo.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t k = 0; k < count; ++k) {
        if (census_stop_flag().load()) {
            continue;
        }
        CensusEntry e;
        try {
            e = census_entry(todo[static_cast<std::size_t>(k)], opts);
        } catch (...) {
            std::lock_guard lock(aggregate);
            if (!failure) {
                failure = std::current_exception();
            }
            census_stop_flag().store(true);
            continue;
        }
        std::lock_guard lock(aggregate);
        done[static_cast<std::size_t>(k)] = 1;
        entries.push_back(e);
        if (!opts.checkpoint_path.empty() && ++since_checkpoint >= opts.checkpoint_every) {
            save_census_checkpoint(opts.checkpoint_path, opts, entries);
            since_checkpoint = 0;
        }
    }

    if (failure) {
        census_stop_flag().store(false);
        std::rethrow_exception(failure);
    }
    const bool interrupted = std::find(done.begin(), done.end(), 0) != done.end();
    if (!opts.checkpoint_path.empty()) {
        save_census_checkpoint(opts.checkpoint_path, opts, entries);
    }
    return summarize(opts, all.size(), std::move(entries), interrupted);
}

std::string census_filter_name(CensusFilter f)
{
    switch (f) {
    case CensusFilter::Raw: return "raw";
    case CensusFilter::AtLeastOneFinal: return "final";
    case CensusFilter::Trim: return "trim";
    }
    return "?";
}

CensusFilter parse_census_filter(const std::string& name)
{
    if (name == "raw") {
        return CensusFilter::Raw;
    }
    if (name == "final") {
        return CensusFilter::AtLeastOneFinal;
    }
    if (name == "trim") {
        return CensusFilter::Trim;
    }
    throw std::invalid_argument("unknown census filter '" + name + "' (raw, final, trim)");
}

void save_census_checkpoint(const std::string& path, const CensusOptions& opts,
                            const std::vector<CensusEntry>& entries)
{
    nlohmann::json doc;
    doc["states"] = opts.states;
    doc["alphabet"] = opts.alphabet;
    doc["filter"] = census_filter_name(opts.filter);
    doc["verify"] = opts.verify_certificates;
    auto& list = doc["entries"] = nlohmann::json::array();
    for (const CensusEntry& e : entries) {
        list.push_back({e.index, e.minimal_size, e.complement_size, e.complete, e.verified});
    }
    // Write-then-rename so an interrupted write never truncates the checkpoint.
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        out << doc.dump() << '\n';
        if (!out) {
            throw std::runtime_error("cannot write checkpoint " + tmp);
        }
    }
    std::filesystem::rename(tmp, path);
}

std::vector<CensusEntry> load_census_checkpoint(const std::string& path, const CensusOptions& opts)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open checkpoint " + path);
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed checkpoint: ") + e.what());
    }
    if (doc.value("states", 0u) != opts.states || doc.value("alphabet", 0u) != opts.alphabet ||
        doc.value("filter", std::string()) != census_filter_name(opts.filter)) {
        throw ParseError("checkpoint was written for a different census");
    }
    std::vector<CensusEntry> entries;
    for (const auto& item : doc.at("entries")) {
        CensusEntry e;
        e.index = item.at(0).get<std::uint64_t>();
        e.minimal_size = item.at(1).get<std::size_t>();
        e.complement_size = item.at(2).get<std::size_t>();
        e.complete = item.at(3).get<bool>();
        e.verified = item.at(4).get<bool>();
        // Incomplete entries are recomputed on resume.
        if (e.complete) {
            entries.push_back(e);
        }
    }
    return entries;
}

std::string format_census_report(const CensusReport& report, const CensusOptions& opts)
{
    std::ostringstream out;
    out << "census states " << opts.states << " alphabet " << opts.alphabet << " filter "
        << census_filter_name(opts.filter) << '\n';
    out << "total " << report.total << '\n';
    out << "finished " << report.entries.size() - report.incomplete << '\n';
    if (report.incomplete > 0) {
        out << "incomplete " << report.incomplete << '\n';
    }
    for (const auto& [size, count] : report.minimal_sizes) {
        out << "minimal " << size << ' ' << count << '\n';
    }
    for (const auto& [size, count] : report.complement_sizes) {
        out << "complement " << size << ' ' << count << '\n';
    }
    out << "max-complement " << report.max_complement << '\n';
    if (opts.verify_certificates) {
        out << "unverified " << report.unverified << '\n';
    }
    if (report.interrupted) {
        out << "interrupted\n";
    }
    return out.str();
}

} // namespace nbamin
