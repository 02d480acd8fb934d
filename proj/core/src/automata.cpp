/* automata.cpp */

#include "stineq/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stineq {

namespace {

std::set<std::size_t> epsilon_closure(const Nfa& nfa, std::set<std::size_t> states) {
    std::deque<std::size_t> work(states.begin(), states.end());
    while (!work.empty()) {
        std::size_t s = work.front();
        work.pop_front();
        for (const auto& t : nfa.transitions) {
            if (t.from == s && t.symbol == 0 && states.insert(t.to).second) {
                work.push_back(t.to);
            }
        }
    }
    return states;
}

std::set<std::size_t> step(const Nfa& nfa, const std::set<std::size_t>& states, char c) {
    std::set<std::size_t> out;
    for (const auto& t : nfa.transitions) {
        if (t.symbol == c && states.count(t.from)) out.insert(t.to);
    }
    return epsilon_closure(nfa, std::move(out));
}

} // namespace

bool nfa_accepts(const Nfa& nfa, std::string_view word) {
    std::set<std::size_t> current(nfa.initial.begin(), nfa.initial.end());
    current = epsilon_closure(nfa, std::move(current));
    for (char c : word) current = step(nfa, current, c);
    for (std::size_t s : nfa.accepting) {
        if (current.count(s)) return true;
    }
    return false;
}

std::size_t Dfa::symbol_index(char c) const {
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), c);
    if (it == alphabet.end() || *it != c) {
        throw std::invalid_argument(std::string("letter '") + c + "' not in alphabet");
    }
    return static_cast<std::size_t>(it - alphabet.begin());
}

bool Dfa::accepts(std::string_view word) const {
    std::size_t s = initial;
    for (char c : word) s = next[s][symbol_index(c)];
    return accepting[s];
}

Dfa determinize(const Nfa& nfa, const std::vector<char>& alphabet) {
    Dfa out;
    out.alphabet = alphabet;
    std::sort(out.alphabet.begin(), out.alphabet.end());
    out.alphabet.erase(std::unique(out.alphabet.begin(), out.alphabet.end()),
                       out.alphabet.end());

    std::map<std::set<std::size_t>, std::size_t> index;
    std::vector<std::set<std::size_t>> subsets;
    auto intern = [&](std::set<std::size_t> subset) {
        auto [it, fresh] = index.emplace(std::move(subset), subsets.size());
        if (fresh) {
            subsets.push_back(it->first);
            out.next.emplace_back(out.alphabet.size(), 0);
            bool acc = false;
            for (std::size_t s : nfa.accepting) acc = acc || it->first.count(s);
            out.accepting.push_back(acc);
        }
        return it->second;
    };

    std::set<std::size_t> start(nfa.initial.begin(), nfa.initial.end());
    out.initial = intern(epsilon_closure(nfa, std::move(start)));
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        for (std::size_t a = 0; a < out.alphabet.size(); ++a) {
            std::size_t target = intern(step(nfa, subsets[i], out.alphabet[a]));
            out.next[i][a] = target;
        }
    }
    out.state_count = subsets.size();
    return out;
}

Dfa minimize(const Dfa& dfa) {
    // Restrict to reachable states.
    std::vector<std::size_t> order;
    std::vector<std::size_t> remap(dfa.state_count, SIZE_MAX);
    order.push_back(dfa.initial);
    remap[dfa.initial] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t a = 0; a < dfa.alphabet.size(); ++a) {
            std::size_t t = dfa.next[order[i]][a];
            if (remap[t] == SIZE_MAX) {
                remap[t] = order.size();
                order.push_back(t);
            }
        }
    }

    std::size_t n = order.size();
    std::vector<std::size_t> cls(n);
    for (std::size_t i = 0; i < n; ++i) cls[i] = dfa.accepting[order[i]] ? 1 : 0;

    bool changed = true;
    while (changed) {
        changed = false;
        std::map<std::vector<std::size_t>, std::size_t> sig_index;
        std::vector<std::size_t> fresh(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::size_t> sig;
            sig.push_back(cls[i]);
            for (std::size_t a = 0; a < dfa.alphabet.size(); ++a) {
                sig.push_back(cls[remap[dfa.next[order[i]][a]]]);
            }
            auto [it, inserted] = sig_index.emplace(std::move(sig), sig_index.size());
            fresh[i] = it->second;
            (void)inserted;
        }
        if (fresh != cls) {
            cls = fresh;
            changed = true;
        }
    }

    std::size_t classes = 0;
    for (std::size_t c : cls) classes = std::max(classes, c + 1);

    Dfa out;
    out.alphabet = dfa.alphabet;
    out.state_count = classes;
    out.initial = cls[0];
    out.accepting.assign(classes, false);
    out.next.assign(classes, std::vector<std::size_t>(dfa.alphabet.size(), 0));
    for (std::size_t i = 0; i < n; ++i) {
        out.accepting[cls[i]] = dfa.accepting[order[i]];
        for (std::size_t a = 0; a < dfa.alphabet.size(); ++a) {
            out.next[cls[i]][a] = cls[remap[dfa.next[order[i]][a]]];
        }
    }
    return out;
}

Dfa complement(const Dfa& dfa) {
    Dfa out = dfa;
    for (std::size_t i = 0; i < out.state_count; ++i) out.accepting[i] = !out.accepting[i];
    return out;
}

Dfa product(const Dfa& a, const Dfa& b, bool intersect) {
    if (a.alphabet != b.alphabet) throw std::invalid_argument("alphabet mismatch");
    Dfa out;
    out.alphabet = a.alphabet;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    auto intern = [&](std::size_t x, std::size_t y) {
        auto [it, fresh] = index.emplace(std::make_pair(x, y), pairs.size());
        if (fresh) {
            pairs.emplace_back(x, y);
            out.next.emplace_back(out.alphabet.size(), 0);
            bool acc = intersect ? (a.accepting[x] && b.accepting[y])
                                 : (a.accepting[x] || b.accepting[y]);
            out.accepting.push_back(acc);
        }
        return it->second;
    };
    out.initial = intern(a.initial, b.initial);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::size_t s = 0; s < out.alphabet.size(); ++s) {
            out.next[i][s] = intern(a.next[pairs[i].first][s], b.next[pairs[i].second][s]);
        }
    }
    out.state_count = pairs.size();
    return out;
}

InclusionResult dfa_included(const Dfa& a, const Dfa& b) {
    if (a.alphabet != b.alphabet) throw std::invalid_argument("alphabet mismatch");
    // BFS over the pair graph looking for a state accepting in a, not in b;
    // the breadth-first order makes the witness a shortest one.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> parent;
    std::vector<char> via;
    auto push = [&](std::size_t x, std::size_t y, std::size_t from, char c) {
        if (seen.emplace(std::make_pair(x, y), pairs.size()).second) {
            pairs.emplace_back(x, y);
            parent.push_back(from);
            via.push_back(c);
            return true;
        }
        return false;
    };
    push(a.initial, b.initial, SIZE_MAX, 0);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [x, y] = pairs[i];
        if (a.accepting[x] && !b.accepting[y]) {
            std::string w;
            for (std::size_t j = i; parent[j] != SIZE_MAX; j = parent[j]) w.push_back(via[j]);
            std::reverse(w.begin(), w.end());
            return {false, w};
        }
        for (std::size_t s = 0; s < a.alphabet.size(); ++s) {
            push(a.next[x][s], b.next[y][s], i, a.alphabet[s]);
        }
    }
    return {true, {}};
}

std::string dfa_canonical_key(const Dfa& dfa) {
    Dfa m = minimize(dfa);
    // minimize() already relabels in BFS discovery order from the initial state.
    std::ostringstream os;
    os << m.state_count << ';' << m.initial << ';';
    for (char c : m.alphabet) os << c;
    os << ';';
    for (std::size_t i = 0; i < m.state_count; ++i) os << (m.accepting[i] ? '1' : '0');
    os << ';';
    for (std::size_t i = 0; i < m.state_count; ++i) {
        for (std::size_t a = 0; a < m.alphabet.size(); ++a) os << m.next[i][a] << ',';
    }
    return os.str();
}

} // namespace stineq
