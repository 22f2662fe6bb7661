#ifndef NBAMIN_ENCODING_HH
#define NBAMIN_ENCODING_HH

#include "nbamin/nba.hh"
#include "nbamin/sat.hh"

#include <cstdint>
#include <optional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace nbamin {

/// Positive (good) and negative (bad) example words; always disjoint.
class SampleSets {
public:
    /// Both return false if the word was already present; throw
    /// std::invalid_argument if it is in the other set.
    bool add_good(const UpWord& w);
    bool add_bad(const UpWord& w);

    const std::set<UpWord>& good() const { return good_; }
    const std::set<UpWord>& bad() const { return bad_; }
    std::size_t size() const { return good_.size() + bad_.size(); }
    bool operator==(const SampleSets&) const = default;

private:
    std::set<UpWord> good_;
    std::set<UpWord> bad_;
};

struct CandidateOptions {
    /// Every state j > 0 gets an incoming edge from some i < j.
    bool symmetry_breaking = false;
    /// No edge leaves the start state on these letters.
    std::vector<Letter> forbidden_start_letters;
};

struct CandidateQuery {
    std::size_t states = 1;
    Alphabet alphabet{1};
    /// Good and bad words may overlap here; the encoding is then UNSAT.
    std::vector<UpWord> good;
    std::vector<UpWord> bad;
    CandidateOptions options;

    CandidateQuery(std::size_t n, Alphabet sigma, const SampleSets& samples, CandidateOptions opts = {});
    CandidateQuery(std::size_t n, Alphabet sigma, std::vector<UpWord> good_words,
                   std::vector<UpWord> bad_words, CandidateOptions opts = {});
};

/// Families of the semantic SAT variables.
enum class VarKind : std::uint8_t {
    Final,         // f(i): state i is final
    Edge,          // t(i,j,a): a-labelled edge i -> j
    Path,          // d(i,j,w): i reaches j reading w
    PathStep,      // o(i,j,k,a,w): i -a-> k, then k reaches j reading w
    Power,         // x(w,i,j,m): i reaches j reading w^l, 1 <= l <= 2^m
    PowerSplit,    // h(w,i,k,j,m): x(w,i,k,m) and x(w,k,j,m)
    FinalPath,     // D(i,j,w): like d, visiting a final state
    FinalPathStep, // O(i,j,k,a,w)
    Reach,         // s(u,v,i,M): start reaches i reading u v^l
    ReachVia,      // uvar(u,v,i,j,M): start reaches i by u, then j by v^l
    Loop,          // B(i,j,v,M): i -v, final-> j, then j reaches i by v^l
    LoopAt,        // L(i,v,M): some B(i,j,v,M)
    Knot,          // y(u,v,i): u v^ω accepted with loop knot i
    Accept,        // z(u,v): u v^ω accepted
};

using WordId = std::int32_t;

struct SemanticVar {
    VarKind kind;
    std::int32_t i = -1;
    std::int32_t j = -1;
    std::int32_t k = -1;
    std::int32_t letter = -1;
    std::int32_t level = -1;
    WordId word = -1; // w or v
    WordId stem = -1; // u

    bool operator==(const SemanticVar&) const = default;
};

struct SemanticVarHash {
    std::size_t operator()(const SemanticVar& v) const;
};

/// Bijection between semantic variables and DIMACS indices 1..size().
class VarCatalog {
public:
    /// Returns the index and whether it was created by this call.
    std::pair<int, bool> intern(const SemanticVar& v);
    std::optional<int> find(const SemanticVar& v) const;
    const SemanticVar& at(int index) const { return vars_.at(static_cast<std::size_t>(index - 1)); }
    int size() const { return static_cast<int>(vars_.size()); }

    WordId intern_word(const Word& w);
    const Word& word(WordId id) const { return words_.at(static_cast<std::size_t>(id)); }

    /// Human-readable name such as d_{0,1,"01"}.
    std::string describe(int index) const;

private:
    std::vector<SemanticVar> vars_;
    std::unordered_map<SemanticVar, int, SemanticVarHash> index_;
    std::vector<Word> words_;
    std::map<Word, WordId> word_ids_;
};

struct EncodingStats {
    std::size_t num_words = 0;         // κ
    std::size_t total_word_length = 0; // ρ
    unsigned alphabet_size = 0;        // σ
    std::size_t states = 0;            // n
    std::size_t variable_count = 0;
    std::size_t clause_count = 0;
};

struct Encoding {
    Cnf cnf;
    VarCatalog catalog;
    EncodingStats stats;
    int repetition_levels = 0; // M
};

/// CNF whose models are exactly the n-state automata (start 0) accepting all
/// good words and rejecting all bad words.
Encoding build_encoding(const CandidateQuery& q);

/// Reads t(i,j,a) and f(i) off a model.
Nba decode_model(const Model& model, const VarCatalog& catalog, std::size_t states, Alphabet alphabet);

/// Encodes, solves and decodes. Returns nullopt on UNSAT, throws SolverTimeout
/// when the budget runs out. The decoded automaton is re-checked against every
/// example word.
std::optional<Nba> solve_candidate(const CandidateQuery& q, const SolverChoice& solver = {},
                                   const Budget& budget = {}, SolverStats* stats = nullptr);

} // namespace nbamin

#endif
