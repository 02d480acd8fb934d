/* lang.cpp */

#include "stineq/lang.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace stineq {

Level Level::parse(const std::string& text) {
    auto bad = [&]() -> std::runtime_error {
        return std::invalid_argument("bad level '" + text + "' (expected n, n/2 or n.5)");
    };
    if (text.empty()) throw bad();
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        if (den != "2" || num.empty() || num.find_first_not_of("0123456789") != std::string::npos) {
            throw bad();
        }
        unsigned n = static_cast<unsigned>(std::stoul(num));
        if (n % 2 == 0) throw bad(); // write integer levels plainly
        return Level{n};
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (whole.find_first_not_of("0123456789") != std::string::npos) throw bad();
        unsigned n = static_cast<unsigned>(std::stoul(whole));
        if (frac == "5") return Level{2 * n + 1};
        if (frac == "0" || frac.empty()) return Level{2 * n};
        throw bad();
    }
    if (text.find_first_not_of("0123456789") != std::string::npos) throw bad();
    return Level{2 * static_cast<unsigned>(std::stoul(text))};
}

std::string Level::str() const {
    if (is_integer()) return std::to_string(twice / 2);
    return std::to_string(twice) + "/2";
}

// ---------------------------------------------------------------------------
// Expressions

LangExpr LangExpr::empty(Level lv) { return LangExpr{Kind::Empty, lv, {}, {}}; }
LangExpr LangExpr::all(Level lv) { return LangExpr{Kind::All, lv, {}, {}}; }

LangExpr LangExpr::product(std::vector<LangExpr> inner, std::string letters, Level lv) {
    if (inner.size() != letters.size() + 1) {
        throw std::invalid_argument("marked product needs k letters and k+1 languages");
    }
    return LangExpr{Kind::Product, lv, std::move(inner), std::move(letters)};
}

LangExpr LangExpr::union_of(std::vector<LangExpr> members, Level lv) {
    if (members.size() < 2) throw std::invalid_argument("union needs at least two members");
    return LangExpr{Kind::Union, lv, std::move(members), {}};
}

LangExpr LangExpr::intersection_of(std::vector<LangExpr> members, Level lv) {
    if (members.size() < 2) throw std::invalid_argument("intersection needs at least two members");
    return LangExpr{Kind::Intersection, lv, std::move(members), {}};
}

LangExpr LangExpr::complement_of(LangExpr inner, Level lv) {
    std::vector<LangExpr> parts;
    parts.push_back(std::move(inner));
    return LangExpr{Kind::Complement, lv, std::move(parts), {}};
}

std::size_t LangExpr::size() const {
    std::size_t n = 1 + letters.size();
    for (const auto& p : parts) n += p.size();
    return n;
}

std::string LangExpr::serial() const {
    switch (kind) {
        case Kind::Empty: return "E";
        case Kind::All: return "A";
        case Kind::Product: {
            std::string out = "P(";
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (i > 0) {
                    out.push_back(' ');
                    out.push_back(letters[i - 1]);
                    out.push_back(' ');
                }
                out += parts[i].serial();
            }
            out.push_back(')');
            return out;
        }
        case Kind::Union:
        case Kind::Intersection: {
            std::string out = kind == Kind::Union ? "U(" : "I(";
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (i > 0) out.push_back(',');
                out += parts[i].serial();
            }
            out.push_back(')');
            return out;
        }
        case Kind::Complement: return "C(" + parts[0].serial() + ")";
    }
    return {};
}

namespace {

unsigned ceil_to_integer_twice(unsigned twice) { return twice + (twice % 2); }

} // namespace

Level min_level(const LangExpr& e) {
    switch (e.kind) {
        case LangExpr::Kind::Empty:
        case LangExpr::Kind::All: return Level{0};
        case LangExpr::Kind::Product: {
            unsigned inner = 0;
            for (const auto& p : e.parts) inner = std::max(inner, min_level(p).twice);
            if (e.letters.empty()) return Level{inner}; // trivial product is its part
            return Level{ceil_to_integer_twice(inner) + 1};
        }
        case LangExpr::Kind::Union: {
            unsigned lv = 0;
            for (const auto& p : e.parts) lv = std::max(lv, min_level(p).twice);
            return Level{lv};
        }
        case LangExpr::Kind::Intersection: {
            unsigned lv = 0;
            for (const auto& p : e.parts) lv = std::max(lv, min_level(p).twice);
            return Level{std::max(ceil_to_integer_twice(lv), 2u)};
        }
        case LangExpr::Kind::Complement:
            return Level{std::max(ceil_to_integer_twice(min_level(e.parts[0]).twice), 2u)};
    }
    return Level{0};
}

bool well_leveled(const LangExpr& e) { return min_level(e) <= e.level; }

Dfa expr_to_dfa(const LangExpr& e, const std::vector<char>& alphabet) {
    switch (e.kind) {
        case LangExpr::Kind::Empty:
        case LangExpr::Kind::All: {
            Dfa d;
            d.alphabet = alphabet;
            d.state_count = 1;
            d.initial = 0;
            d.accepting = {e.kind == LangExpr::Kind::All};
            d.next = {std::vector<std::size_t>(alphabet.size(), 0)};
            return d;
        }
        case LangExpr::Kind::Product: {
            // Chain the part automata with the marked letters as bridges.
            Nfa nfa;
            std::vector<Dfa> parts;
            parts.reserve(e.parts.size());
            for (const auto& p : e.parts) parts.push_back(expr_to_dfa(p, alphabet));
            std::size_t offset = 0;
            std::vector<std::size_t> starts;
            for (const auto& d : parts) {
                starts.push_back(offset + d.initial);
                for (std::size_t s = 0; s < d.state_count; ++s) {
                    for (std::size_t a = 0; a < d.alphabet.size(); ++a) {
                        nfa.transitions.push_back({offset + s, d.alphabet[a], offset + d.next[s][a]});
                    }
                }
                offset += d.state_count;
            }
            nfa.state_count = offset;
            nfa.initial = {starts[0]};
            offset = 0;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                for (std::size_t s = 0; s < parts[i].state_count; ++s) {
                    if (!parts[i].accepting[s]) continue;
                    if (i + 1 < parts.size()) {
                        nfa.transitions.push_back({offset + s, e.letters[i], starts[i + 1]});
                    } else {
                        nfa.accepting.push_back(offset + s);
                    }
                }
                offset += parts[i].state_count;
            }
            return minimize(determinize(nfa, alphabet));
        }
        case LangExpr::Kind::Union:
        case LangExpr::Kind::Intersection: {
            Dfa acc = expr_to_dfa(e.parts[0], alphabet);
            for (std::size_t i = 1; i < e.parts.size(); ++i) {
                acc = minimize(product(acc, expr_to_dfa(e.parts[i], alphabet),
                                       e.kind == LangExpr::Kind::Intersection));
            }
            return acc;
        }
        case LangExpr::Kind::Complement:
            return minimize(complement(expr_to_dfa(e.parts[0], alphabet)));
    }
    throw std::logic_error("unreachable");
}

LangExpr subword_language(std::string_view word) {
    std::vector<LangExpr> inner;
    for (std::size_t i = 0; i <= word.size(); ++i) inner.push_back(LangExpr::all());
    return LangExpr::product(std::move(inner), std::string(word), Level{1});
}

// ---------------------------------------------------------------------------
// Level enumeration

namespace {

struct Entry {
    LangExpr expr;
    std::size_t size;
    std::string serial;
};

bool entry_less(const Entry& a, const Entry& b) {
    if (a.size != b.size) return a.size < b.size;
    return a.serial < b.serial;
}

constexpr std::size_t kSizeCap = 14;

void push_entry(std::vector<Entry>& out, LangExpr expr) {
    Entry e;
    e.size = expr.size();
    e.serial = expr.serial();
    e.expr = std::move(expr);
    out.push_back(std::move(e));
}

// All tuples of pool indices (with repetition, any order) whose sizes sum
// to at most `budget`; calls sink per tuple.
void tuples_within(const std::vector<Entry>& pool, std::size_t count, std::size_t budget,
                   std::vector<std::size_t>& tuple,
                   const std::function<void(const std::vector<std::size_t>&)>& sink) {
    if (tuple.size() == count) {
        sink(tuple);
        return;
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool[i].size > budget) continue;
        tuple.push_back(i);
        tuples_within(pool, count, budget - pool[i].size, tuple, sink);
        tuple.pop_back();
    }
}

// Strictly increasing index combinations, for canonical unions/intersections.
void combinations_within(const std::vector<Entry>& pool, std::size_t first, std::size_t budget,
                         std::size_t chosen, std::size_t min_choose,
                         std::vector<std::size_t>& combo,
                         const std::function<void(const std::vector<std::size_t>&)>& sink) {
    if (chosen >= min_choose) sink(combo);
    for (std::size_t i = first; i < pool.size(); ++i) {
        if (pool[i].size > budget) continue;
        combo.push_back(i);
        combinations_within(pool, i + 1, budget - pool[i].size, chosen + 1, min_choose, combo,
                            sink);
        combo.pop_back();
    }
}

void gen_products(const std::vector<Entry>& below, const std::vector<char>& alphabet,
                  Level level, std::size_t max_size, std::vector<Entry>& out) {
    // size = 1 + k + sum of inner sizes, k >= 1 marked letters
    for (std::size_t k = 1; 1 + k + (k + 1) <= max_size; ++k) {
        std::size_t inner_budget = max_size - 1 - k;
        std::vector<std::size_t> tuple;
        tuples_within(below, k + 1, inner_budget, tuple, [&](const std::vector<std::size_t>& t) {
            std::vector<std::size_t> odo(k, 0);
            while (true) {
                std::vector<LangExpr> inner;
                inner.reserve(t.size());
                for (std::size_t idx : t) inner.push_back(below[idx].expr);
                std::string word;
                for (std::size_t i = 0; i < k; ++i) word.push_back(alphabet[odo[i]]);
                push_entry(out, LangExpr::product(std::move(inner), std::move(word), level));
                std::size_t i = 0;
                for (; i < k; ++i) {
                    if (++odo[i] < alphabet.size()) break;
                    odo[i] = 0;
                }
                if (i == k) break;
            }
        });
    }
}

void gen_unions(const std::vector<Entry>& atoms, Level level, std::size_t max_size,
                std::vector<Entry>& out) {
    std::vector<std::size_t> combo;
    combinations_within(atoms, 0, max_size - 1, 0, 2, combo,
                        [&](const std::vector<std::size_t>& c) {
                            std::vector<LangExpr> members;
                            members.reserve(c.size());
                            for (std::size_t idx : c) members.push_back(atoms[idx].expr);
                            push_entry(out, LangExpr::union_of(std::move(members), level));
                        });
}

void gen_boolean(const std::vector<Entry>& below, Level level, std::size_t max_size,
                 std::vector<Entry>& out) {
    // Closure of the half level below under complement, union and
    // intersection, by increasing size. Nested unions (and intersections)
    // are flattened away by construction; double complements are dropped.
    std::vector<Entry> combos = below;
    std::sort(combos.begin(), combos.end(), entry_less);
    for (std::size_t target = 2; target <= max_size; ++target) {
        std::vector<Entry> fresh;
        for (const Entry& e : combos) {
            if (e.size + 1 != target) continue;
            if (e.expr.kind == LangExpr::Kind::Complement) continue;
            push_entry(fresh, LangExpr::complement_of(e.expr, level));
        }
        std::vector<std::size_t> combo;
        for (bool intersect : {false, true}) {
            auto kind = intersect ? LangExpr::Kind::Intersection : LangExpr::Kind::Union;
            combinations_within(
                combos, 0, target - 1, 0, 2, combo, [&](const std::vector<std::size_t>& c) {
                    std::size_t total = 1;
                    for (std::size_t idx : c) total += combos[idx].size;
                    if (total != target) return;
                    for (std::size_t idx : c) {
                        if (combos[idx].expr.kind == kind) return; // keep flattened
                    }
                    std::vector<LangExpr> members;
                    for (std::size_t idx : c) members.push_back(combos[idx].expr);
                    push_entry(fresh, intersect
                                          ? LangExpr::intersection_of(std::move(members), level)
                                          : LangExpr::union_of(std::move(members), level));
                });
        }
        for (auto& e : fresh) combos.push_back(std::move(e));
        std::stable_sort(combos.begin(), combos.end(), entry_less);
        combos.erase(std::unique(combos.begin(), combos.end(),
                                 [](const Entry& a, const Entry& b) {
                                     return a.serial == b.serial;
                                 }),
                     combos.end());
    }
    for (auto& e : combos) out.push_back(std::move(e));
}

struct PoolState {
    std::size_t built_size = 0;
    std::vector<Entry> entries;
};

std::mutex& enum_mutex() {
    static std::mutex mu;
    return mu;
}

// Deduplicated, (size, serial)-sorted language pool of one level over one
// alphabet, cached process-wide and grown on demand. Growth only appends:
// a larger bound adds only larger candidates, so dedup winners are stable.
// Callers must hold enum_mutex().
const std::vector<Entry>& level_pool(Level level, const std::vector<char>& alphabet,
                                     std::size_t max_size) {
    static std::map<std::pair<unsigned, std::string>, PoolState> cache;
    max_size = std::min(max_size, kSizeCap);
    auto key = std::make_pair(level.twice, std::string(alphabet.begin(), alphabet.end()));
    PoolState& st = cache[key];
    if (max_size <= st.built_size) return st.entries;

    std::vector<Entry> cands;
    if (level.twice == 0) {
        push_entry(cands, LangExpr::empty(level));
        push_entry(cands, LangExpr::all(level));
    } else {
        const std::vector<Entry>& below = level_pool(Level{level.twice - 1}, alphabet, max_size);
        if (level.is_half()) {
            for (const Entry& e : below) {
                Entry copy = e;
                copy.expr.level = level;
                cands.push_back(std::move(copy));
            }
            gen_products(below, alphabet, level, max_size, cands);
            std::vector<Entry> atoms = cands;
            std::sort(atoms.begin(), atoms.end(), entry_less);
            gen_unions(atoms, level, max_size, cands);
        } else {
            gen_boolean(below, level, max_size, cands);
        }
    }

    std::sort(cands.begin(), cands.end(), entry_less);
    std::vector<Entry> pool;
    std::set<std::string> seen;
    for (auto& e : cands) {
        if (e.size > max_size) continue;
        std::string dfa_key = dfa_canonical_key(expr_to_dfa(e.expr, alphabet));
        if (seen.insert(std::move(dfa_key)).second) pool.push_back(std::move(e));
    }
    st.entries = std::move(pool);
    st.built_size = max_size;
    return st.entries;
}

} // namespace

LevelEnumerator::LevelEnumerator(Level level, std::vector<char> alphabet)
    : level_(level), alphabet_(std::move(alphabet)) {
    std::sort(alphabet_.begin(), alphabet_.end());
    alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
    if (alphabet_.empty()) throw std::invalid_argument("alphabet must be nonempty");
}

std::optional<LangExpr> LevelEnumerator::at(std::size_t idx) {
    std::lock_guard<std::mutex> lock(enum_mutex());
    for (std::size_t bound = 1; bound <= kSizeCap; ++bound) {
        const std::vector<Entry>& pool = level_pool(level_, alphabet_, bound);
        if (idx < pool.size()) return pool[idx].expr;
    }
    return std::nullopt;
}

std::vector<LangExpr> enumerate_level(Level level, const std::vector<char>& alphabet,
                                      std::size_t budget) {
    LevelEnumerator stream(level, alphabet);
    std::vector<LangExpr> out;
    for (std::size_t i = 0; i < budget; ++i) {
        std::optional<LangExpr> e = stream.at(i);
        if (!e) break;
        out.push_back(std::move(*e));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

nlohmann::json expr_body_to_json(const LangExpr& e) {
    switch (e.kind) {
        case LangExpr::Kind::Empty: return "empty";
        case LangExpr::Kind::All: return "all";
        case LangExpr::Kind::Product: {
            nlohmann::json parts = nlohmann::json::array();
            for (std::size_t i = 0; i < e.parts.size(); ++i) {
                if (i > 0) parts.push_back(std::string(1, e.letters[i - 1]));
                parts.push_back(expr_body_to_json(e.parts[i]));
            }
            return nlohmann::json{{"product", std::move(parts)}};
        }
        case LangExpr::Kind::Union:
        case LangExpr::Kind::Intersection: {
            nlohmann::json members = nlohmann::json::array();
            for (const auto& p : e.parts) members.push_back(expr_body_to_json(p));
            return nlohmann::json{
                {e.kind == LangExpr::Kind::Union ? "union" : "intersection", std::move(members)}};
        }
        case LangExpr::Kind::Complement:
            return nlohmann::json{{"complement", expr_body_to_json(e.parts[0])}};
    }
    return nullptr;
}

LangExpr expr_body_from_json(const nlohmann::json& j, Level lv) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "empty") return LangExpr::empty(lv);
        if (s == "all") return LangExpr::all(lv);
        throw std::invalid_argument("unknown expression atom '" + s + "'");
    }
    if (!j.is_object() || j.size() != 1) {
        throw std::invalid_argument("expression must be an atom or a single-key object");
    }
    const auto& [key, value] = *j.items().begin();
    if (key == "product") {
        std::vector<LangExpr> inner;
        std::string letters;
        bool expect_lang = true;
        for (const auto& item : value) {
            if (expect_lang) {
                inner.push_back(expr_body_from_json(item, lv));
            } else {
                std::string s = item.get<std::string>();
                if (s.size() != 1 || s[0] < 'a' || s[0] > 'z') {
                    throw std::invalid_argument("marked letter must be a single letter a..z");
                }
                letters.push_back(s[0]);
            }
            expect_lang = !expect_lang;
        }
        if (expect_lang) throw std::invalid_argument("product must end with a language");
        return LangExpr::product(std::move(inner), std::move(letters), lv);
    }
    if (key == "union" || key == "intersection") {
        std::vector<LangExpr> members;
        for (const auto& item : value) members.push_back(expr_body_from_json(item, lv));
        if (members.size() == 1) return members[0];
        return key == "union" ? LangExpr::union_of(std::move(members), lv)
                              : LangExpr::intersection_of(std::move(members), lv);
    }
    if (key == "complement") return LangExpr::complement_of(expr_body_from_json(value, lv), lv);
    throw std::invalid_argument("unknown expression operator '" + key + "'");
}

} // namespace

nlohmann::json expr_to_json(const LangExpr& e) {
    return nlohmann::json{{"level", e.level.str()}, {"expr", expr_body_to_json(e)}};
}

LangExpr expr_from_json(const nlohmann::json& j) {
    Level lv = Level::parse(j.at("level").get<std::string>());
    LangExpr e = expr_body_from_json(j.at("expr"), lv);
    if (!well_leveled(e)) {
        throw std::invalid_argument("expression does not fit its declared level");
    }
    return e;
}

} // namespace stineq
