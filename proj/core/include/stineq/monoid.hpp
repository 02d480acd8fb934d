/* monoid.hpp -- finite ordered monoids: validation, omega powers, term
 * evaluation, inequality satisfaction, duals, syntactic ordered monoids of
 * automata, and exhaustive enumeration of small monoids.
 */

#ifndef STINEQ_MONOID_HPP_
#define STINEQ_MONOID_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stineq/automata.hpp"
#include "stineq/term.hpp"

namespace stineq {

/**
 * A finite monoid with a compatible partial order. The table holds element
 * indices; leq[x][y] means x <= y. Instances are plain data: call
 * validate() after building one by hand.
 */
struct OrderedMonoid {
    std::vector<std::string> names;
    std::size_t identity = 0;
    std::vector<std::vector<std::size_t>> table;
    std::vector<std::vector<bool>> leq;

    std::size_t size() const { return names.size(); }
    std::size_t mul(std::size_t a, std::size_t b) const { return table[a][b]; }

    /// Discretely ordered monoid over the given table (order = equality).
    static OrderedMonoid discrete(std::vector<std::string> names, std::size_t identity,
                                  std::vector<std::vector<std::size_t>> table);
};

/**
 * Checks associativity, the two-sided identity, that leq is a partial
 * order, and that the order is compatible with multiplication on both
 * sides. Returns the first violation found, or nullopt when valid.
 */
std::optional<std::string> validate(const OrderedMonoid& m);

/// The unique idempotent power of s, found by iterating s^k until
/// s^k s^k = s^k. Equals s^{n!} for n the monoid size.
std::size_t omega_power(const OrderedMonoid& m, std::size_t s);

/// Letter images for evaluating terms; every letter of the term needs one.
using Assignment = std::map<char, std::size_t>;

/// Evaluates a term under the assignment; throws std::invalid_argument on
/// a letter without an image.
std::size_t eval(const OrderedMonoid& m, const Assignment& phi, const TermPtr& t);

struct Violation {
    Assignment assignment;
    std::size_t lhs_value;
    std::size_t rhs_value;
};

/// First assignment (in odometer order over the joint letter set) with
/// eval(u) not below eval(v), or nullopt when u <= v holds in m.
std::optional<Violation> find_violation(const OrderedMonoid& m, const TermPtr& u,
                                        const TermPtr& v);

/// Whether eval(u) <= eval(v) for every assignment of the letters of u, v.
bool satisfies(const OrderedMonoid& m, const TermPtr& u, const TermPtr& v);

/// s^w s = s^w for every s; equivalently, all subgroups are trivial.
bool is_aperiodic(const OrderedMonoid& m);

/// (xy)^w = (xy)^w x = y (xy)^w for all x, y.
bool is_j_trivial(const OrderedMonoid& m);

/// Same table with the order reversed.
OrderedMonoid dual(const OrderedMonoid& m);

/**
 * A language presented by a monoid, letter images and an up-closed
 * accepting filter.
 */
struct RecognizedLanguage {
    OrderedMonoid monoid;
    Assignment letter_images;
    std::vector<std::size_t> filter;

    bool member(std::string_view word) const;
};

/**
 * The syntactic ordered monoid of the language of a complete DFA. The
 * input is minimized, the elements are its distinct state transformations
 * named by shortest generating words, and m <= n holds when every monoid
 * context sending m into the accepting filter also sends n there.
 */
RecognizedLanguage syntactic_ordered_monoid(const Dfa& dfa);

/**
 * Streams every associative table with identity (fixed at index 0) of size
 * up to max_size, paired with every compatible partial order. With
 * dedup_isomorphic set, only the representative with the least table/order
 * serialization over identity-fixing permutations is kept. The callback
 * returns false to stop early.
 */
void enumerate_ordered_monoids(unsigned max_size, bool dedup_isomorphic,
                               const std::function<bool(const OrderedMonoid&)>& yield);

std::vector<OrderedMonoid> enumerate_ordered_monoids(unsigned max_size,
                                                     bool dedup_isomorphic = false);

/// Distinct multiplication tables only, discretely ordered. Cached.
const std::vector<OrderedMonoid>& monoid_tables_up_to(unsigned max_size);

nlohmann::json monoid_to_json(const OrderedMonoid& m);
/// Accepts {"elements", "identity", "table", "order"}; the order lists the
/// non-reflexive pairs [lesser, greater]. Reflexivity is added back and the
/// result validated; throws std::invalid_argument on bad input.
OrderedMonoid monoid_from_json(const nlohmann::json& j);

} // namespace stineq

#endif // STINEQ_MONOID_HPP_
