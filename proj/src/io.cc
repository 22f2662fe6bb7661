#include "nbamin/io.hh"
#include "nbamin/errors.hh"

#include <fstream>
#include <sstream>

namespace nbamin {

namespace {

/// Next non-blank line with comments stripped; false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& number)
{
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            return true;
        }
    }
    return false;
}

[[noreturn]] void fail(std::size_t line, const std::string& what)
{
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

unsigned long read_number(std::istringstream& fields, std::size_t line, const char* what)
{
    std::string token;
    if (!(fields >> token) || token.find_first_not_of("0123456789") != std::string::npos) {
        fail(line, std::string("expected ") + what);
    }
    try {
        return std::stoul(token);
    } catch (const std::exception&) {
        fail(line, std::string("number out of range for ") + what);
    }
}

void expect_end(std::istringstream& fields, std::size_t line)
{
    std::string extra;
    if (fields >> extra) {
        fail(line, "unexpected trailing token '" + extra + "'");
    }
}

std::istringstream directive(std::istream& in, std::size_t& number, const std::string& keyword)
{
    std::string line;
    if (!next_line(in, line, number)) {
        throw ParseError("unexpected end of input, expected '" + keyword + "'");
    }
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    if (word != keyword) {
        fail(number, "expected '" + keyword + "', found '" + word + "'");
    }
    return fields;
}

Word parse_letters(const std::string& text)
{
    Word letters;
    if (text.empty()) {
        return letters;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string part = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
            throw ParseError("malformed letter '" + part + "' in word '" + text + "'");
        }
        letters.push_back(static_cast<Letter>(std::stoul(part)));
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return letters;
}

std::string format_letters(const Word& w)
{
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0) {
            s += ',';
        }
        s += std::to_string(w[i]);
    }
    return s;
}

} // namespace

Nba parse_nba(std::istream& in)
{
    std::size_t number = 0;
    std::string line;
    if (!next_line(in, line, number)) {
        throw ParseError("empty automaton file");
    }
    {
        std::istringstream header(line);
        std::string magic;
        std::string version;
        header >> magic >> version;
        if (magic != "NBA" || version != "v1") {
            fail(number, "expected header 'NBA v1'");
        }
        expect_end(header, number);
    }
    auto fields = directive(in, number, "alphabet");
    const auto sigma = read_number(fields, number, "alphabet size");
    expect_end(fields, number);
    fields = directive(in, number, "states");
    const auto states = read_number(fields, number, "state count");
    expect_end(fields, number);
    fields = directive(in, number, "start");
    const auto start = read_number(fields, number, "start state");
    expect_end(fields, number);
    fields = directive(in, number, "final");
    std::vector<State> finals;
    std::string token;
    while (fields >> token) {
        if (token.find_first_not_of("0123456789") != std::string::npos) {
            fail(number, "malformed final state '" + token + "'");
        }
        finals.push_back(static_cast<State>(std::stoul(token)));
    }
    std::vector<Transition> transitions;
    while (next_line(in, line, number)) {
        std::istringstream t(line);
        std::string word;
        t >> word;
        if (word != "trans") {
            fail(number, "expected 'trans', found '" + word + "'");
        }
        const auto from = read_number(t, number, "source state");
        const auto letter = read_number(t, number, "letter");
        const auto to = read_number(t, number, "target state");
        expect_end(t, number);
        transitions.push_back({static_cast<State>(from), static_cast<Letter>(letter), static_cast<State>(to)});
    }
    try {
        return Nba(Alphabet(static_cast<unsigned>(sigma)), states, static_cast<State>(start),
                   std::move(finals), std::move(transitions));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

Nba parse_nba(const std::string& text)
{
    std::istringstream in(text);
    return parse_nba(in);
}

std::string format_nba(const Nba& a)
{
    std::ostringstream out;
    out << "NBA v1\n";
    out << "alphabet " << a.alphabet_size() << '\n';
    out << "states " << a.num_states() << '\n';
    out << "start " << a.start() << '\n';
    out << "final";
    for (State q : a.finals()) {
        out << ' ' << q;
    }
    out << '\n';
    for (const Transition& t : a.transitions()) {
        out << "trans " << t.from << ' ' << t.letter << ' ' << t.to << '\n';
    }
    return out.str();
}

UpWord parse_word(const std::string& text)
{
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos || text.find(':', colon + 1) != std::string::npos) {
        throw ParseError("word must have the form <stem>:<period>: '" + text + "'");
    }
    Word period = parse_letters(text.substr(colon + 1));
    if (period.empty()) {
        throw ParseError("word period must be nonempty: '" + text + "'");
    }
    return UpWord(parse_letters(text.substr(0, colon)), std::move(period));
}

std::string format_word(const UpWord& w)
{
    return format_letters(w.stem) + ":" + format_letters(w.period);
}

Certificate parse_certificate(std::istream& in)
{
    std::size_t number = 0;
    std::string line;
    if (!next_line(in, line, number)) {
        throw ParseError("empty certificate");
    }
    {
        std::istringstream header(line);
        std::string magic;
        std::string version;
        header >> magic >> version;
        if (magic != "CERT" || version != "v1") {
            fail(number, "expected header 'CERT v1'");
        }
    }
    Certificate cert;
    auto fields = directive(in, number, "n");
    cert.n_min = read_number(fields, number, "minimal size");
    expect_end(fields, number);
    while (next_line(in, line, number)) {
        std::istringstream entry(line);
        std::string kind;
        std::string word;
        entry >> kind >> word;
        expect_end(entry, number);
        try {
            if (kind == "good") {
                cert.samples.add_good(parse_word(word));
            } else if (kind == "bad") {
                cert.samples.add_bad(parse_word(word));
            } else {
                fail(number, "expected 'good' or 'bad', found '" + kind + "'");
            }
        } catch (const std::invalid_argument& e) {
            fail(number, e.what());
        }
    }
    return cert;
}

std::string format_certificate(const Certificate& cert)
{
    std::ostringstream out;
    out << "CERT v1\n";
    out << "n " << cert.n_min << '\n';
    for (const UpWord& w : cert.samples.good()) {
        out << "good " << format_word(w) << '\n';
    }
    for (const UpWord& w : cert.samples.bad()) {
        out << "bad " << format_word(w) << '\n';
    }
    return out.str();
}

std::string format_trace(const Trace& trace)
{
    std::ostringstream out;
    out << "TRACE v1\n";
    for (const TraceEvent& e : trace.events) {
        switch (e.kind) {
        case TraceEvent::Kind::SeedGood: out << "seed-good " << format_word(*e.word); break;
        case TraceEvent::Kind::SeedBad: out << "seed-bad " << format_word(*e.word); break;
        case TraceEvent::Kind::AddGood: out << "good " << format_word(*e.word); break;
        case TraceEvent::Kind::AddBad: out << "bad " << format_word(*e.word); break;
        case TraceEvent::Kind::Candidate:
            out << "candidate " << e.states << " decisions " << e.stats.decisions << " conflicts "
                << e.stats.conflicts;
            break;
        case TraceEvent::Kind::Grow:
            out << "grow " << e.states << " decisions " << e.stats.decisions << " conflicts "
                << e.stats.conflicts;
            break;
        case TraceEvent::Kind::Finished: out << "finished " << e.states; break;
        }
        out << '\n';
    }
    return out.str();
}

Nba read_nba_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    return parse_nba(in);
}

} // namespace nbamin
