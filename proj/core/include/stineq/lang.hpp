/* lang.hpp -- level-indexed regular language expressions: marked products
 * and Boolean combinations, compilation to automata, and the budgeted
 * enumeration feeding the refuter.
 */

#ifndef STINEQ_LANG_HPP_
#define STINEQ_LANG_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stineq/automata.hpp"
#include "stineq/level.hpp"

namespace stineq {

/**
 * A language expression carrying its declared hierarchy level.
 *
 * Level 0 admits Empty and All. A half level n + 1/2 admits marked
 * products L0 a1 L1 ... ak Lk over level-n expressions and unions of
 * those. An integer level n admits Boolean combinations (union,
 * intersection, complement) of level n - 1/2 expressions. Expressions of
 * a lower level may be reused at any higher one.
 */
struct LangExpr {
    enum class Kind { Empty, All, Product, Union, Intersection, Complement };

    Kind kind = Kind::Empty;
    Level level{0};
    std::vector<LangExpr> parts; // product: k+1 inner languages; bool ops: members
    std::string letters;         // product only: the k marked letters

    static LangExpr empty(Level lv = Level{0});
    static LangExpr all(Level lv = Level{0});
    static LangExpr product(std::vector<LangExpr> inner, std::string letters, Level lv);
    static LangExpr union_of(std::vector<LangExpr> members, Level lv);
    static LangExpr intersection_of(std::vector<LangExpr> members, Level lv);
    static LangExpr complement_of(LangExpr inner, Level lv);

    /// Total node count; letters in a product count one node each.
    std::size_t size() const;
    /// Canonical textual form, e.g. "P(A a A)"; used for ordering.
    std::string serial() const;
};

/// Smallest level at which the expression shape type-checks.
Level min_level(const LangExpr& e);
/// The declared level admits the shape.
bool well_leveled(const LangExpr& e);

/// Compiles to a minimized complete DFA over the given alphabet, which
/// must cover the expression's letters.
Dfa expr_to_dfa(const LangExpr& e, const std::vector<char>& alphabet);

/// The subword language w-up = A* w1 A* ... wn A* as a level-1/2 expression.
LangExpr subword_language(std::string_view word);

/**
 * A deterministic, restartable stream of the languages of one level over
 * one alphabet: expressions appear in nondecreasing structural size (ties
 * broken by serial text) and are deduplicated by minimal DFA, so each
 * language appears once. Results are cached process-wide.
 */
class LevelEnumerator {
public:
    LevelEnumerator(Level level, std::vector<char> alphabet);

    /// The idx-th language of the stream, or nullopt once the generator
    /// hits its structural size cap.
    std::optional<LangExpr> at(std::size_t idx);

private:
    Level level_;
    std::vector<char> alphabet_;
};

/// First `budget` languages of the stream.
std::vector<LangExpr> enumerate_level(Level level, const std::vector<char>& alphabet,
                                      std::size_t budget);

nlohmann::json expr_to_json(const LangExpr& e);
LangExpr expr_from_json(const nlohmann::json& j);

} // namespace stineq

#endif // STINEQ_LANG_HPP_
