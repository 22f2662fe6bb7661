#ifndef NBAMIN_ERRORS_HH
#define NBAMIN_ERRORS_HH

#include <stdexcept>
#include <string>

namespace nbamin {

/// Input text that does not follow one of the line formats.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Determinization produced more states than the configured cap.
class DeterminizationLimit : public std::runtime_error {
public:
    explicit DeterminizationLimit(std::size_t limit)
        : std::runtime_error("determinization exceeded " + std::to_string(limit) + " states"),
          limit_(limit) {}
    std::size_t limit() const { return limit_; }

private:
    std::size_t limit_;
};

/// SAT budget (wall clock or conflicts) ran out before an answer.
class SolverTimeout : public std::runtime_error {
public:
    SolverTimeout() : std::runtime_error("SAT solver budget exhausted") {}
};

class ExternalSolverError : public std::runtime_error {
public:
    enum class Kind { ProcessFailure, Unparsable, BadModel };

    ExternalSolverError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

} // namespace nbamin

#endif
