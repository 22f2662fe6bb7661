#include "nbamin/nba.hh"

#include <stdexcept>

namespace nbamin {

Nba sample_nba(const RandomNbaParams& params, std::mt19937_64& rng)
{
    if (params.states == 0) {
        throw std::invalid_argument("random automaton needs at least one state");
    }
    if (params.p_final < 0 || params.p_final > 1 || params.p_trans < 0 || params.p_trans > 1) {
        throw std::invalid_argument("probabilities must lie in [0, 1]");
    }
    const Alphabet alphabet(params.alphabet);
    std::bernoulli_distribution final_coin(params.p_final);
    std::bernoulli_distribution edge_coin(params.p_trans);
    std::vector<State> finals;
    for (State q = 0; q < params.states; ++q) {
        if (final_coin(rng)) {
            finals.push_back(q);
        }
    }
    std::vector<Transition> transitions;
    for (State i = 0; i < params.states; ++i) {
        for (Letter a = 0; a < alphabet.size(); ++a) {
            for (State j = 0; j < params.states; ++j) {
                if (edge_coin(rng)) {
                    transitions.push_back({i, a, j});
                }
            }
        }
    }
    return Nba(alphabet, params.states, 0, std::move(finals), std::move(transitions));
}

Nba random_nba(const RandomNbaParams& params, std::uint64_t seed, std::size_t max_attempts)
{
    std::mt19937_64 rng(seed);
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        Nba candidate = sample_nba(params, rng);
        if (is_trim(candidate)) {
            return candidate;
        }
    }
    throw std::runtime_error("random_nba: no trim automaton within the attempt limit");
}

} // namespace nbamin
