#include "nbamin/errors.hh"
#include "nbamin/sat.hh"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace nbamin {

void write_dimacs(std::ostream& out, const Cnf& cnf)
{
    out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
    for (const Clause& c : cnf.clauses) {
        for (Lit l : c) {
            out << l << ' ';
        }
        out << "0\n";
    }
}

std::string write_dimacs(const Cnf& cnf)
{
    std::ostringstream out;
    write_dimacs(out, cnf);
    return out.str();
}

Cnf read_dimacs(std::istream& in)
{
    Cnf cnf;
    std::string line;
    bool header = false;
    std::size_t declared_clauses = 0;
    Clause current;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first) || first[0] == 'c' || first[0] == '%') {
            continue;
        }
        if (first == "p") {
            std::string format;
            long vars = 0;
            if (header || !(fields >> format >> vars >> declared_clauses) || format != "cnf" || vars < 0) {
                throw ParseError("malformed DIMACS header: " + line);
            }
            cnf.num_vars = static_cast<int>(vars);
            header = true;
            continue;
        }
        if (!header) {
            throw ParseError("DIMACS clause before header");
        }
        std::istringstream lits(line);
        long l = 0;
        while (lits >> l) {
            if (l == 0) {
                cnf.add_clause(std::move(current));
                current.clear();
            } else {
                if (l > cnf.num_vars || -l > cnf.num_vars) {
                    throw ParseError("DIMACS literal exceeds declared variable count");
                }
                current.push_back(static_cast<Lit>(l));
            }
        }
        if (!lits.eof()) {
            throw ParseError("malformed DIMACS clause line: " + line);
        }
    }
    if (!header) {
        throw ParseError("missing DIMACS header");
    }
    if (!current.empty()) {
        throw ParseError("unterminated DIMACS clause");
    }
    if (cnf.clauses.size() != declared_clauses) {
        throw ParseError("DIMACS clause count does not match header");
    }
    return cnf;
}

} // namespace nbamin
