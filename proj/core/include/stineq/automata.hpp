/* automata.hpp -- small NFA/DFA toolkit: subset construction, Moore
 * minimization, Boolean combinations and inclusion with shortest witnesses.
 */

#ifndef STINEQ_AUTOMATA_HPP_
#define STINEQ_AUTOMATA_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace stineq {

/**
 * A nondeterministic automaton over letters a..z. The symbol 0 marks an
 * epsilon transition. State indices must stay below state_count.
 */
struct Nfa {
    std::size_t state_count = 0;
    std::vector<std::size_t> initial;
    std::vector<std::size_t> accepting;
    struct Transition {
        std::size_t from;
        char symbol; // 0 is epsilon
        std::size_t to;
    };
    std::vector<Transition> transitions;
};

bool nfa_accepts(const Nfa& nfa, std::string_view word);

/// A complete deterministic automaton over an explicit alphabet.
struct Dfa {
    std::vector<char> alphabet; // sorted, distinct
    std::size_t state_count = 0;
    std::size_t initial = 0;
    std::vector<bool> accepting;
    std::vector<std::vector<std::size_t>> next; // [state][alphabet index]

    bool accepts(std::string_view word) const;
    std::size_t symbol_index(char c) const;
};

/// Subset construction; the alphabet must cover every letter the NFA uses.
Dfa determinize(const Nfa& nfa, const std::vector<char>& alphabet);

/// Reachable-state Moore minimization.
Dfa minimize(const Dfa& dfa);

Dfa complement(const Dfa& dfa);
Dfa product(const Dfa& a, const Dfa& b, bool intersect);

struct InclusionResult {
    bool included = false;
    std::string witness; // shortest word in L(a) \ L(b) when not included
};

/// Language inclusion L(a) <= L(b); both automata must share an alphabet.
InclusionResult dfa_included(const Dfa& a, const Dfa& b);

/// Serialization of the minimized, BFS-relabelled automaton; equal keys
/// mean equal languages.
std::string dfa_canonical_key(const Dfa& dfa);

} // namespace stineq

#endif // STINEQ_AUTOMATA_HPP_
