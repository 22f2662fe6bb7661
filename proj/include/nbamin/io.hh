#ifndef NBAMIN_IO_HH
#define NBAMIN_IO_HH

#include "nbamin/minimizer.hh"
#include "nbamin/nba.hh"

#include <iosfwd>
#include <string>

namespace nbamin {

// Line formats. `#` starts a comment; blank lines are ignored.
//
//   NBA v1                 CERT v1
//   alphabet <k>           n <n_min>
//   states <n>             good <word>
//   start <q>              bad <word>
//   final <q>...
//   trans <i> <a> <j>
//
// Words are `<stem>:<period>` with comma-separated letters, e.g. `0,1:1,0`.

Nba parse_nba(std::istream& in);
Nba parse_nba(const std::string& text);
std::string format_nba(const Nba& a);

UpWord parse_word(const std::string& text);
std::string format_word(const UpWord& w);

Certificate parse_certificate(std::istream& in);
std::string format_certificate(const Certificate& cert);

/// `TRACE v1` followed by one event per line.
std::string format_trace(const Trace& trace);

Nba read_nba_file(const std::string& path);

} // namespace nbamin

#endif
