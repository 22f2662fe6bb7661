#include "nbamin/encoding.hh"
#include "nbamin/errors.hh"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace nbamin {

bool SampleSets::add_good(const UpWord& w)
{
    if (bad_.contains(w)) {
        throw std::invalid_argument("word is already a bad example");
    }
    return good_.insert(w).second;
}

bool SampleSets::add_bad(const UpWord& w)
{
    if (good_.contains(w)) {
        throw std::invalid_argument("word is already a good example");
    }
    return bad_.insert(w).second;
}

CandidateQuery::CandidateQuery(std::size_t n, Alphabet sigma, const SampleSets& samples,
                               CandidateOptions opts)
    : CandidateQuery(n, sigma, {samples.good().begin(), samples.good().end()},
                     {samples.bad().begin(), samples.bad().end()}, std::move(opts))
{
}

CandidateQuery::CandidateQuery(std::size_t n, Alphabet sigma, std::vector<UpWord> good_words,
                               std::vector<UpWord> bad_words, CandidateOptions opts)
    : states(n), alphabet(sigma), good(std::move(good_words)), bad(std::move(bad_words)),
      options(std::move(opts))
{
    if (states == 0) {
        throw std::invalid_argument("candidate size must be at least 1");
    }
    auto check = [&](const UpWord& w) {
        if (w.period.empty()) {
            throw std::invalid_argument("example word with empty period");
        }
        for (Letter l : w.stem) {
            if (!alphabet.contains(l)) {
                throw std::invalid_argument("example word letter out of alphabet range");
            }
        }
        for (Letter l : w.period) {
            if (!alphabet.contains(l)) {
                throw std::invalid_argument("example word letter out of alphabet range");
            }
        }
    };
    std::for_each(good.begin(), good.end(), check);
    std::for_each(bad.begin(), bad.end(), check);
    for (Letter l : options.forbidden_start_letters) {
        if (!alphabet.contains(l)) {
            throw std::invalid_argument("forbidden start letter out of alphabet range");
        }
    }
}

std::size_t SemanticVarHash::operator()(const SemanticVar& v) const
{
    std::size_t h = static_cast<std::size_t>(v.kind);
    for (std::int32_t x : {v.i, v.j, v.k, v.letter, v.level, v.word, v.stem}) {
        h = h * 1000003u ^ static_cast<std::size_t>(static_cast<std::uint32_t>(x));
    }
    return h;
}

std::pair<int, bool> VarCatalog::intern(const SemanticVar& v)
{
    auto [it, inserted] = index_.emplace(v, static_cast<int>(vars_.size()) + 1);
    if (inserted) {
        vars_.push_back(v);
    }
    return {it->second, inserted};
}

std::optional<int> VarCatalog::find(const SemanticVar& v) const
{
    auto it = index_.find(v);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

WordId VarCatalog::intern_word(const Word& w)
{
    auto [it, inserted] = word_ids_.emplace(w, static_cast<WordId>(words_.size()));
    if (inserted) {
        words_.push_back(w);
    }
    return it->second;
}

std::string VarCatalog::describe(int index) const
{
    const SemanticVar& v = at(index);
    auto quoted = [&](WordId id) {
        std::string s = "\"";
        const Word& w = word(id);
        for (std::size_t p = 0; p < w.size(); ++p) {
            if (p > 0 && w.size() > 1 && std::any_of(w.begin(), w.end(), [](Letter l) { return l > 9; })) {
                s += ',';
            }
            s += std::to_string(w[p]);
        }
        return s + "\"";
    };
    std::ostringstream out;
    switch (v.kind) {
    case VarKind::Final: out << "f_{" << v.i << "}"; break;
    case VarKind::Edge: out << "t_{" << v.i << "," << v.j << ",'" << v.letter << "'}"; break;
    case VarKind::Path: out << "d_{" << v.i << "," << v.j << "," << quoted(v.word) << "}"; break;
    case VarKind::PathStep:
        out << "o_{" << v.i << "," << v.j << "," << v.k << ",'" << v.letter << "'," << quoted(v.word) << "}";
        break;
    case VarKind::Power:
        out << "x_{" << quoted(v.word) << "," << v.i << "," << v.j << "," << v.level << "}";
        break;
    case VarKind::PowerSplit:
        out << "h_{" << quoted(v.word) << "," << v.i << "," << v.k << "," << v.j << "," << v.level << "}";
        break;
    case VarKind::FinalPath: out << "D_{" << v.i << "," << v.j << "," << quoted(v.word) << "}"; break;
    case VarKind::FinalPathStep:
        out << "O_{" << v.i << "," << v.j << "," << v.k << ",'" << v.letter << "'," << quoted(v.word) << "}";
        break;
    case VarKind::Reach:
        out << "s_{" << quoted(v.stem) << "," << quoted(v.word) << "," << v.i << "," << v.level << "}";
        break;
    case VarKind::ReachVia:
        out << "u_{" << quoted(v.stem) << "," << quoted(v.word) << "," << v.i << "," << v.j << ","
            << v.level << "}";
        break;
    case VarKind::Loop:
        out << "B_{" << v.i << "," << v.j << "," << quoted(v.word) << "," << v.level << "}";
        break;
    case VarKind::LoopAt: out << "L_{" << v.i << "," << quoted(v.word) << "," << v.level << "}"; break;
    case VarKind::Knot: out << "y_{" << quoted(v.stem) << "," << quoted(v.word) << "," << v.i << "}"; break;
    case VarKind::Accept: out << "z_{" << quoted(v.stem) << "," << quoted(v.word) << "}"; break;
    }
    return out.str();
}

namespace {

/// Creates variables on first use together with their defining clauses.
class Encoder {
public:
    Encoder(const CandidateQuery& q, Encoding& out)
        : q_(q), out_(out), n_(static_cast<int>(q.states)),
          levels_(static_cast<int>(std::bit_width(q.states - 1)) + 1)
    {
        out_.repetition_levels = levels_;
    }

    void run()
    {
        for (int i = 0; i < n_; ++i) {
            final_state(i);
        }
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                for (Letter a = 0; a < q_.alphabet.size(); ++a) {
                    edge(i, j, static_cast<int>(a));
                }
            }
        }

        std::vector<std::pair<int, bool>> units;
        for (const UpWord& w : q_.good) {
            units.emplace_back(accept(w), true);
        }
        for (const UpWord& w : q_.bad) {
            units.emplace_back(accept(w), false);
        }

        if (q_.options.symmetry_breaking) {
            for (int j = 1; j < n_; ++j) {
                Clause incoming;
                for (int i = 0; i < j; ++i) {
                    for (Letter a = 0; a < q_.alphabet.size(); ++a) {
                        incoming.push_back(edge(i, j, static_cast<int>(a)));
                    }
                }
                emit(incoming);
            }
        }
        for (Letter a : q_.options.forbidden_start_letters) {
            for (int j = 0; j < n_; ++j) {
                emit({-edge(0, j, static_cast<int>(a))});
            }
        }
        for (const auto& [z, positive] : units) {
            emit({positive ? z : -z});
        }

        std::set<UpWord> distinct(q_.good.begin(), q_.good.end());
        distinct.insert(q_.bad.begin(), q_.bad.end());
        auto& s = out_.stats;
        s.num_words = distinct.size();
        for (const UpWord& w : distinct) {
            s.total_word_length += w.stem.size() + w.period.size();
        }
        s.alphabet_size = q_.alphabet.size();
        s.states = q_.states;
        s.variable_count = static_cast<std::size_t>(out_.catalog.size());
        s.clause_count = out_.cnf.clauses.size();
    }

private:
    /// Interns v; on creation calls `define(var)` to emit its clauses.
    int get(const SemanticVar& v, const std::function<void(int)>& define)
    {
        const auto [index, created] = out_.catalog.intern(v);
        if (created) {
            out_.cnf.num_vars = out_.catalog.size();
            define(index);
        }
        return index;
    }

    void emit(Clause c)
    {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        for (std::size_t p = 1; p < c.size(); ++p) {
            if (c[p] == -c[p - 1] || (c[p - 1] < 0 && std::binary_search(c.begin(), c.end(), -c[p - 1]))) {
                return;
            }
        }
        out_.cnf.add_clause(std::move(c));
    }

    void define_and(int out, int a, int b)
    {
        emit({-out, a});
        emit({-out, b});
        emit({-a, -b, out});
    }

    void define_or(int out, const std::vector<int>& inputs)
    {
        Clause big{-out};
        big.insert(big.end(), inputs.begin(), inputs.end());
        emit(big);
        for (int in : inputs) {
            emit({-in, out});
        }
    }

    WordId word_id(const Word& w) { return out_.catalog.intern_word(w); }

    int final_state(int i)
    {
        return get({.kind = VarKind::Final, .i = i}, [](int) {});
    }

    int edge(int i, int j, int a)
    {
        return get({.kind = VarKind::Edge, .i = i, .j = j, .letter = a}, [](int) {});
    }

    int path(int i, int j, const Word& w)
    {
        const WordId id = word_id(w);
        return get({.kind = VarKind::Path, .i = i, .j = j, .word = id}, [&, i, j](int self) {
            if (w.empty()) {
                emit({i == j ? self : -self});
                return;
            }
            const int a = static_cast<int>(w.front());
            if (w.size() == 1) {
                define_or(self, {edge(i, j, a)});
                return;
            }
            const Word rest(w.begin() + 1, w.end());
            std::vector<int> steps;
            for (int k = 0; k < n_; ++k) {
                steps.push_back(path_step(i, j, k, a, rest));
            }
            define_or(self, steps);
        });
    }

    int path_step(int i, int j, int k, int a, const Word& rest)
    {
        const WordId id = word_id(rest);
        return get({.kind = VarKind::PathStep, .i = i, .j = j, .k = k, .letter = a, .word = id},
                   [&, i, j, k, a](int self) { define_and(self, edge(i, k, a), path(k, j, rest)); });
    }

    int final_path(int i, int j, const Word& w)
    {
        const WordId id = word_id(w);
        return get({.kind = VarKind::FinalPath, .i = i, .j = j, .word = id}, [&, i, j](int self) {
            const int a = static_cast<int>(w.front());
            if (w.size() == 1) {
                const int t = edge(i, j, a);
                const int fi = final_state(i);
                const int fj = final_state(j);
                emit({-self, t});
                emit({-self, fi, fj});
                emit({-t, -fi, self});
                emit({-t, -fj, self});
                return;
            }
            const Word rest(w.begin() + 1, w.end());
            std::vector<int> steps;
            for (int k = 0; k < n_; ++k) {
                steps.push_back(final_path_step(i, j, k, a, rest));
            }
            define_or(self, steps);
        });
    }

    int final_path_step(int i, int j, int k, int a, const Word& rest)
    {
        const WordId id = word_id(rest);
        return get({.kind = VarKind::FinalPathStep, .i = i, .j = j, .k = k, .letter = a, .word = id},
                   [&, i, j, k, a](int self) {
                       // (D(i,k,[a]) ∧ d(k,j,rest)) ∨ (t(i,k,a) ∧ D(k,j,rest))
                       const int p = final_path(i, k, Word{static_cast<Letter>(a)});
                       const int q = path(k, j, rest);
                       const int r = edge(i, k, a);
                       const int s = final_path(k, j, rest);
                       emit({-self, p, r});
                       emit({-self, p, s});
                       emit({-self, q, r});
                       emit({-self, q, s});
                       emit({-p, -q, self});
                       emit({-r, -s, self});
                   });
    }

    int power(const Word& v, int i, int j, int m)
    {
        const WordId id = word_id(v);
        return get({.kind = VarKind::Power, .i = i, .j = j, .level = m, .word = id}, [&, i, j, m](int self) {
            if (m == 0) {
                define_or(self, {path(i, j, v)});
                return;
            }
            std::vector<int> options{power(v, i, j, m - 1)};
            for (int k = 0; k < n_; ++k) {
                options.push_back(power_split(v, i, k, j, m - 1));
            }
            define_or(self, options);
        });
    }

    int power_split(const Word& v, int i, int k, int j, int m)
    {
        const WordId id = word_id(v);
        return get({.kind = VarKind::PowerSplit, .i = i, .j = j, .k = k, .level = m, .word = id},
                   [&, i, k, j, m](int self) { define_and(self, power(v, i, k, m), power(v, k, j, m)); });
    }

    int reach_via(const UpWord& w, int i, int j)
    {
        const WordId u = word_id(w.stem);
        const WordId v = word_id(w.period);
        return get({.kind = VarKind::ReachVia, .i = i, .j = j, .level = levels_, .word = v, .stem = u},
                   [&, i, j](int self) { define_and(self, path(0, i, w.stem), power(w.period, i, j, levels_)); });
    }

    int reach(const UpWord& w, int j)
    {
        const WordId u = word_id(w.stem);
        const WordId v = word_id(w.period);
        return get({.kind = VarKind::Reach, .i = j, .level = levels_, .word = v, .stem = u}, [&, j](int self) {
            std::vector<int> via;
            for (int i = 0; i < n_; ++i) {
                via.push_back(reach_via(w, i, j));
            }
            define_or(self, via);
        });
    }

    int loop(int i, int j, const Word& v)
    {
        const WordId id = word_id(v);
        return get({.kind = VarKind::Loop, .i = i, .j = j, .level = levels_, .word = id},
                   [&, i, j](int self) { define_and(self, final_path(i, j, v), power(v, j, i, levels_)); });
    }

    int loop_at(int i, const Word& v)
    {
        const WordId id = word_id(v);
        return get({.kind = VarKind::LoopAt, .i = i, .level = levels_, .word = id}, [&, i](int self) {
            std::vector<int> loops;
            for (int j = 0; j < n_; ++j) {
                loops.push_back(loop(i, j, v));
            }
            define_or(self, loops);
        });
    }

    int knot(const UpWord& w, int i)
    {
        const WordId u = word_id(w.stem);
        const WordId v = word_id(w.period);
        return get({.kind = VarKind::Knot, .i = i, .word = v, .stem = u},
                   [&, i](int self) { define_and(self, reach(w, i), loop_at(i, w.period)); });
    }

    int accept(const UpWord& w)
    {
        const WordId u = word_id(w.stem);
        const WordId v = word_id(w.period);
        return get({.kind = VarKind::Accept, .word = v, .stem = u}, [&](int self) {
            std::vector<int> knots;
            for (int i = 0; i < n_; ++i) {
                knots.push_back(knot(w, i));
            }
            define_or(self, knots);
        });
    }

    const CandidateQuery& q_;
    Encoding& out_;
    int n_;
    int levels_;
};

} // namespace

Encoding build_encoding(const CandidateQuery& q)
{
    Encoding e;
    Encoder(q, e).run();
    return e;
}

Nba decode_model(const Model& model, const VarCatalog& catalog, std::size_t states, Alphabet alphabet)
{
    if (model.size() < static_cast<std::size_t>(catalog.size()) + 1) {
        throw std::invalid_argument("model does not assign every catalog variable");
    }
    auto truth = [&](const SemanticVar& v) {
        const auto index = catalog.find(v);
        return index && model[static_cast<std::size_t>(*index)];
    };
    std::vector<State> finals;
    std::vector<Transition> transitions;
    const int n = static_cast<int>(states);
    for (int i = 0; i < n; ++i) {
        if (truth({.kind = VarKind::Final, .i = i})) {
            finals.push_back(static_cast<State>(i));
        }
        for (int j = 0; j < n; ++j) {
            for (Letter a = 0; a < alphabet.size(); ++a) {
                if (truth({.kind = VarKind::Edge, .i = i, .j = j, .letter = static_cast<int>(a)})) {
                    transitions.push_back({static_cast<State>(i), a, static_cast<State>(j)});
                }
            }
        }
    }
    return Nba(alphabet, states, 0, std::move(finals), std::move(transitions));
}

std::optional<Nba> solve_candidate(const CandidateQuery& q, const SolverChoice& solver,
                                   const Budget& budget, SolverStats* stats)
{
    const Encoding e = build_encoding(q);
    const SolveResult r = solve_with(solver, e.cnf, budget);
    if (stats) {
        *stats = r.stats;
    }
    if (r.status == SolveStatus::Timeout) {
        throw SolverTimeout();
    }
    if (r.status == SolveStatus::Unsat) {
        return std::nullopt;
    }
    Nba candidate = decode_model(r.model, e.catalog, q.states, q.alphabet);
    for (const UpWord& w : q.good) {
        if (!member(candidate, w)) {
            throw std::logic_error("decoded candidate rejects a good word");
        }
    }
    for (const UpWord& w : q.bad) {
        if (member(candidate, w)) {
            throw std::logic_error("decoded candidate accepts a bad word");
        }
    }
    return candidate;
}

} // namespace nbamin
