/* monoid.cpp */

#include "stineq/monoid.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace stineq {

OrderedMonoid OrderedMonoid::discrete(std::vector<std::string> names, std::size_t identity,
                                      std::vector<std::vector<std::size_t>> table) {
    OrderedMonoid m;
    m.names = std::move(names);
    m.identity = identity;
    m.table = std::move(table);
    m.leq.assign(m.names.size(), std::vector<bool>(m.names.size(), false));
    for (std::size_t i = 0; i < m.names.size(); ++i) m.leq[i][i] = true;
    return m;
}

std::optional<std::string> validate(const OrderedMonoid& m) {
    std::size_t n = m.size();
    if (n == 0) return "monoid must be nonempty";
    if (m.identity >= n) return "identity index out of range";
    if (m.table.size() != n || m.leq.size() != n) return "table/order dimension mismatch";
    for (std::size_t i = 0; i < n; ++i) {
        if (m.table[i].size() != n || m.leq[i].size() != n) {
            return "table/order row " + std::to_string(i) + " has wrong width";
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (m.table[i][j] >= n) {
                return "table entry (" + std::to_string(i) + "," + std::to_string(j) +
                       ") out of range";
            }
        }
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (m.table[m.identity][x] != x || m.table[x][m.identity] != x) {
            return "identity fails at element " + m.names[x];
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                if (m.mul(m.mul(a, b), c) != m.mul(a, m.mul(b, c))) {
                    return "associativity fails on (" + m.names[a] + "," + m.names[b] + "," +
                           m.names[c] + ")";
                }
            }
        }
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (!m.leq[x][x]) return "order not reflexive at " + m.names[x];
        for (std::size_t y = 0; y < n; ++y) {
            if (x != y && m.leq[x][y] && m.leq[y][x]) {
                return "order not antisymmetric on (" + m.names[x] + "," + m.names[y] + ")";
            }
            if (!m.leq[x][y]) continue;
            for (std::size_t z = 0; z < n; ++z) {
                if (m.leq[y][z] && !m.leq[x][z]) {
                    return "order not transitive on (" + m.names[x] + "," + m.names[y] + "," +
                           m.names[z] + ")";
                }
            }
            // One-sided compatibility on both sides implies the two-sided form.
            for (std::size_t u = 0; u < n; ++u) {
                if (!m.leq[m.mul(u, x)][m.mul(u, y)]) {
                    return "order incompatible with left multiplication by " + m.names[u] +
                           " on (" + m.names[x] + "," + m.names[y] + ")";
                }
                if (!m.leq[m.mul(x, u)][m.mul(y, u)]) {
                    return "order incompatible with right multiplication by " + m.names[u] +
                           " on (" + m.names[x] + "," + m.names[y] + ")";
                }
            }
        }
    }
    return std::nullopt;
}

std::size_t omega_power(const OrderedMonoid& m, std::size_t s) {
    std::size_t p = s;
    for (std::size_t k = 0; k <= m.size(); ++k) {
        if (m.mul(p, p) == p) return p;
        p = m.mul(p, s);
    }
    // Unreachable in a valid finite monoid: some power is idempotent.
    throw std::logic_error("no idempotent power; monoid table is not associative");
}

std::size_t eval(const OrderedMonoid& m, const Assignment& phi, const TermPtr& t) {
    switch (t->kind()) {
        case TermKind::Identity: return m.identity;
        case TermKind::Letter: {
            auto it = phi.find(t->symbol());
            if (it == phi.end()) {
                throw std::invalid_argument(std::string("letter '") + t->symbol() +
                                            "' has no image");
            }
            return it->second;
        }
        case TermKind::Concat:
            return m.mul(eval(m, phi, t->left()), eval(m, phi, t->right()));
        case TermKind::OmegaPower: return omega_power(m, eval(m, phi, t->base()));
    }
    throw std::logic_error("unreachable");
}

std::optional<Violation> find_violation(const OrderedMonoid& m, const TermPtr& u,
                                        const TermPtr& v) {
    std::set<char> letters = letters_of(u);
    std::set<char> more = letters_of(v);
    letters.insert(more.begin(), more.end());
    std::vector<char> vars(letters.begin(), letters.end());

    std::vector<std::size_t> images(vars.size(), 0);
    while (true) {
        Assignment phi;
        for (std::size_t i = 0; i < vars.size(); ++i) phi[vars[i]] = images[i];
        std::size_t a = eval(m, phi, u);
        std::size_t b = eval(m, phi, v);
        if (!m.leq[a][b]) return Violation{std::move(phi), a, b};
        // Odometer over assignments.
        std::size_t i = 0;
        for (; i < images.size(); ++i) {
            if (++images[i] < m.size()) break;
            images[i] = 0;
        }
        if (i == images.size()) return std::nullopt;
    }
}

bool satisfies(const OrderedMonoid& m, const TermPtr& u, const TermPtr& v) {
    return !find_violation(m, u, v).has_value();
}

bool is_aperiodic(const OrderedMonoid& m) {
    for (std::size_t s = 0; s < m.size(); ++s) {
        std::size_t e = omega_power(m, s);
        if (m.mul(e, s) != e) return false;
    }
    return true;
}

bool is_j_trivial(const OrderedMonoid& m) {
    for (std::size_t x = 0; x < m.size(); ++x) {
        for (std::size_t y = 0; y < m.size(); ++y) {
            std::size_t e = omega_power(m, m.mul(x, y));
            if (m.mul(e, x) != e || m.mul(y, e) != e) return false;
        }
    }
    return true;
}

OrderedMonoid dual(const OrderedMonoid& m) {
    OrderedMonoid d = m;
    for (std::size_t x = 0; x < m.size(); ++x) {
        for (std::size_t y = 0; y < m.size(); ++y) d.leq[x][y] = m.leq[y][x];
    }
    return d;
}

bool RecognizedLanguage::member(std::string_view word) const {
    std::size_t value = monoid.identity;
    for (char c : word) {
        auto it = letter_images.find(c);
        if (it == letter_images.end()) return false;
        value = monoid.mul(value, it->second);
    }
    return std::find(filter.begin(), filter.end(), value) != filter.end();
}

// ---------------------------------------------------------------------------
// Syntactic ordered monoids

RecognizedLanguage syntactic_ordered_monoid(const Dfa& dfa) {
    Dfa d = minimize(dfa);
    std::size_t ns = d.state_count;

    using Transformation = std::vector<std::size_t>;
    std::vector<Transformation> elems;
    std::vector<std::string> names;
    std::map<Transformation, std::size_t> index;

    Transformation id(ns);
    std::iota(id.begin(), id.end(), 0);
    index.emplace(id, 0);
    elems.push_back(std::move(id));
    names.emplace_back("1");

    // Breadth-first closure under the letter actions; names are the
    // shortest (then lexicographically least) generating words.
    for (std::size_t i = 0; i < elems.size(); ++i) {
        Transformation current = elems[i];
        for (std::size_t a = 0; a < d.alphabet.size(); ++a) {
            Transformation next(ns);
            for (std::size_t s = 0; s < ns; ++s) next[s] = d.next[current[s]][a];
            auto [it, fresh] = index.emplace(std::move(next), elems.size());
            if (fresh) {
                elems.push_back(it->first);
                names.push_back(names[i] == "1" ? std::string(1, d.alphabet[a])
                                                : names[i] + d.alphabet[a]);
            }
        }
    }

    std::size_t n = elems.size();
    OrderedMonoid m;
    m.names = names;
    m.identity = 0;
    m.table.assign(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Transformation comp(ns);
            for (std::size_t s = 0; s < ns; ++s) comp[s] = elems[j][elems[i][s]];
            m.table[i][j] = index.at(comp);
        }
    }

    std::vector<bool> in_filter(n, false);
    std::vector<std::size_t> filter;
    for (std::size_t i = 0; i < n; ++i) {
        if (d.accepting[elems[i][d.initial]]) {
            in_filter[i] = true;
            filter.push_back(i);
        }
    }

    // Syntactic order: x <= y when every monoid context taking x into the
    // filter also takes y there. Elements are images of words, so context
    // pairs of elements cover all word contexts.
    m.leq.assign(n, std::vector<bool>(n, false));
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            bool below = true;
            for (std::size_t p = 0; p < n && below; ++p) {
                std::size_t px = m.mul(p, x);
                std::size_t py = m.mul(p, y);
                for (std::size_t q = 0; q < n; ++q) {
                    if (in_filter[m.mul(px, q)] && !in_filter[m.mul(py, q)]) {
                        below = false;
                        break;
                    }
                }
            }
            m.leq[x][y] = below;
        }
    }

    RecognizedLanguage lang;
    lang.monoid = std::move(m);
    for (std::size_t a = 0; a < d.alphabet.size(); ++a) {
        Transformation img(ns);
        for (std::size_t s = 0; s < ns; ++s) img[s] = d.next[s][a];
        lang.letter_images[d.alphabet[a]] = index.at(img);
    }
    lang.filter = std::move(filter);
    return lang;
}

// ---------------------------------------------------------------------------
// Enumeration of small ordered monoids

namespace {

std::vector<std::string> default_names(std::size_t n) {
    std::vector<std::string> names;
    names.emplace_back("1");
    for (std::size_t i = 1; i < n; ++i) names.push_back("e" + std::to_string(i));
    return names;
}

bool table_associative(const std::vector<std::vector<std::size_t>>& t) {
    std::size_t n = t.size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                if (t[t[a][b]][c] != t[a][t[b][c]]) return false;
            }
        }
    }
    return true;
}

void enumerate_tables(std::size_t n,
                      const std::function<void(std::vector<std::vector<std::size_t>>)>& sink) {
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        t[0][i] = i;
        t[i][0] = i;
    }
    if (n == 1) {
        sink(t);
        return;
    }
    std::size_t cells = (n - 1) * (n - 1);
    std::vector<std::size_t> digits(cells, 0);
    while (true) {
        for (std::size_t c = 0; c < cells; ++c) {
            t[1 + c / (n - 1)][1 + c % (n - 1)] = digits[c];
        }
        if (table_associative(t)) sink(t);
        std::size_t i = 0;
        for (; i < cells; ++i) {
            if (++digits[i] < n) break;
            digits[i] = 0;
        }
        if (i == cells) return;
    }
}

// All partial orders on {0..n-1} as leq matrices; independent of any table.
const std::vector<std::vector<std::vector<bool>>>& partial_orders(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::vector<std::vector<std::vector<bool>>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (x != y) slots.emplace_back(x, y);
        }
    }
    std::vector<std::vector<std::vector<bool>>> orders;
    for (std::size_t mask = 0; mask < (std::size_t{1} << slots.size()); ++mask) {
        std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
        for (std::size_t x = 0; x < n; ++x) leq[x][x] = true;
        for (std::size_t b = 0; b < slots.size(); ++b) {
            if (mask & (std::size_t{1} << b)) leq[slots[b].first][slots[b].second] = true;
        }
        bool ok = true;
        for (std::size_t x = 0; x < n && ok; ++x) {
            for (std::size_t y = 0; y < n && ok; ++y) {
                if (x != y && leq[x][y] && leq[y][x]) ok = false;
                if (!leq[x][y]) continue;
                for (std::size_t z = 0; z < n; ++z) {
                    if (leq[y][z] && !leq[x][z]) {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if (ok) orders.push_back(std::move(leq));
    }
    return cache.emplace(n, std::move(orders)).first->second;
}

bool order_compatible(const std::vector<std::vector<std::size_t>>& table,
                      const std::vector<std::vector<bool>>& leq) {
    std::size_t n = table.size();
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (!leq[x][y] || x == y) continue;
            for (std::size_t u = 0; u < n; ++u) {
                if (!leq[table[u][x]][table[u][y]]) return false;
                if (!leq[table[x][u]][table[y][u]]) return false;
            }
        }
    }
    return true;
}

std::string monoid_key(const OrderedMonoid& m) {
    std::ostringstream os;
    for (const auto& row : m.table) {
        for (std::size_t v : row) os << v << ',';
    }
    os << ';';
    for (const auto& row : m.leq) {
        for (bool b : row) os << (b ? '1' : '0');
    }
    return os.str();
}

// Least key over the identity-fixing relabelings.
std::string canonical_monoid_key(const OrderedMonoid& m) {
    std::size_t n = m.size();
    std::vector<std::size_t> perm;
    for (std::size_t i = 1; i < n; ++i) perm.push_back(i);
    std::string best;
    do {
        std::vector<std::size_t> to(n);
        to[0] = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) to[i + 1] = perm[i];
        OrderedMonoid r = m;
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = 0; y < n; ++y) {
                r.table[to[x]][to[y]] = to[m.table[x][y]];
                r.leq[to[x]][to[y]] = m.leq[x][y];
            }
        }
        std::string key = monoid_key(r);
        if (best.empty() || key < best) best = std::move(key);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

void enumerate_ordered_monoids(unsigned max_size, bool dedup_isomorphic,
                               const std::function<bool(const OrderedMonoid&)>& yield) {
    if (max_size > 4) throw std::invalid_argument("enumeration is capped at size 4");
    std::set<std::string> seen;
    for (std::size_t n = 1; n <= max_size; ++n) {
        bool stopped = false;
        enumerate_tables(n, [&](std::vector<std::vector<std::size_t>> table) {
            if (stopped) return;
            for (const auto& leq : partial_orders(n)) {
                if (!order_compatible(table, leq)) continue;
                OrderedMonoid m;
                m.names = default_names(n);
                m.identity = 0;
                m.table = table;
                m.leq = leq;
                if (dedup_isomorphic && !seen.insert(canonical_monoid_key(m)).second) continue;
                if (!yield(m)) {
                    stopped = true;
                    return;
                }
            }
        });
        if (stopped) return;
    }
}

std::vector<OrderedMonoid> enumerate_ordered_monoids(unsigned max_size, bool dedup_isomorphic) {
    std::vector<OrderedMonoid> out;
    enumerate_ordered_monoids(max_size, dedup_isomorphic, [&](const OrderedMonoid& m) {
        out.push_back(m);
        return true;
    });
    return out;
}

const std::vector<OrderedMonoid>& monoid_tables_up_to(unsigned max_size) {
    if (max_size > 4) throw std::invalid_argument("enumeration is capped at size 4");
    static std::mutex mu;
    static std::map<unsigned, std::vector<OrderedMonoid>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(max_size);
    if (it != cache.end()) return it->second;
    std::vector<OrderedMonoid> out;
    for (std::size_t n = 1; n <= max_size; ++n) {
        enumerate_tables(n, [&](std::vector<std::vector<std::size_t>> table) {
            out.push_back(OrderedMonoid::discrete(default_names(n), 0, std::move(table)));
        });
    }
    return cache.emplace(max_size, std::move(out)).first->second;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json monoid_to_json(const OrderedMonoid& m) {
    nlohmann::json j;
    j["elements"] = m.names;
    j["identity"] = m.names[m.identity];
    nlohmann::json table = nlohmann::json::array();
    for (const auto& row : m.table) {
        nlohmann::json r = nlohmann::json::array();
        for (std::size_t v : row) r.push_back(m.names[v]);
        table.push_back(std::move(r));
    }
    j["table"] = std::move(table);
    nlohmann::json order = nlohmann::json::array();
    for (std::size_t x = 0; x < m.size(); ++x) {
        for (std::size_t y = 0; y < m.size(); ++y) {
            if (x != y && m.leq[x][y]) order.push_back({m.names[x], m.names[y]});
        }
    }
    j["order"] = std::move(order);
    return j;
}

OrderedMonoid monoid_from_json(const nlohmann::json& j) {
    OrderedMonoid m;
    try {
        m.names = j.at("elements").get<std::vector<std::string>>();
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < m.names.size(); ++i) {
            if (!index.emplace(m.names[i], i).second) {
                throw std::invalid_argument("duplicate element name " + m.names[i]);
            }
        }
        auto lookup = [&](const std::string& name) {
            auto it = index.find(name);
            if (it == index.end()) throw std::invalid_argument("unknown element " + name);
            return it->second;
        };
        m.identity = lookup(j.at("identity").get<std::string>());
        for (const auto& row : j.at("table")) {
            std::vector<std::size_t> r;
            for (const auto& cell : row) r.push_back(lookup(cell.get<std::string>()));
            m.table.push_back(std::move(r));
        }
        m.leq.assign(m.names.size(), std::vector<bool>(m.names.size(), false));
        for (std::size_t i = 0; i < m.names.size(); ++i) m.leq[i][i] = true;
        if (j.contains("order")) {
            for (const auto& pair : j.at("order")) {
                m.leq[lookup(pair.at(0).get<std::string>())]
                     [lookup(pair.at(1).get<std::string>())] = true;
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad monoid JSON: ") + e.what());
    }
    if (auto violation = validate(m)) {
        throw std::invalid_argument("invalid monoid: " + *violation);
    }
    return m;
}

} // namespace stineq
