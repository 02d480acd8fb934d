/* decide.hpp -- the level-dispatching driver: exact procedures at levels 0,
 * 1/2 and 1, dovetailed prover/refuter above, and replayable witnesses.
 */

#ifndef STINEQ_DECIDE_HPP_
#define STINEQ_DECIDE_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stineq/lang.hpp"
#include "stineq/level.hpp"
#include "stineq/monoid.hpp"
#include "stineq/proof.hpp"
#include "stineq/term.hpp"

namespace stineq {

/**
 * A counterexample: a language whose syntactic ordered monoid violates the
 * queried inequality under the recorded assignment. The alphabet pins the
 * automaton the monoid is derived from, so the witness revalidates from
 * its serialization alone.
 */
struct Witness {
    LangExpr language;
    std::vector<char> alphabet;
    std::map<char, std::string> assignment; // query letter -> element name
    std::string lhs_value;
    std::string rhs_value;
};

/// Recomputes the syntactic ordered monoid and replays the violation.
bool witness_revalidates(const Witness& w, const TermPtr& u, const TermPtr& v);

struct BudgetSpent {
    std::size_t proof_expansions = 0;
    std::size_t languages = 0;
};

struct Verdict {
    enum class Kind { Holds, Fails, Unknown };
    Kind kind = Kind::Unknown;

    // Holds: either an exact procedure tag or a checked proof; integer
    // levels carry one sub-verdict per direction.
    std::string procedure;
    std::optional<Proof> proof;
    std::vector<Verdict> parts;

    // Fails:
    std::optional<Witness> witness;

    // Unknown:
    std::string exhausted_first; // "prover" or "refuter"

    BudgetSpent spent;
};

/**
 * Decides u <= v at the given level.
 *
 *   0        always Holds (singleton monoids)
 *   1/2      exact subword inclusion of canonical forms; never Unknown
 *   n >= 1   both directions at n - 1/2; exact whenever that level is
 *   >= 3/2   fair dovetailing of proof search and refutation until one
 *            side succeeds or both budgets are spent
 *
 * Levels above 5/2 are accepted but increasingly expensive; anything the
 * Level type cannot represent is rejected with std::invalid_argument.
 */
Verdict decide(const TermPtr& u, const TermPtr& v, Level level, const Budget& budget = {});

/**
 * Streams the level's languages, builds each syntactic ordered monoid (the
 * size cap in the budget skips oversized ones) and tests the inequality
 * under every assignment of the query letters. Nullopt only means the
 * budget ran out, never validity.
 */
std::optional<Witness> refute(const TermPtr& u, const TermPtr& v, Level level,
                              const Budget& budget = {});

nlohmann::json verdict_to_json(const Verdict& verdict, const TermPtr& u, const TermPtr& v,
                               Level level);
nlohmann::json witness_to_json(const Witness& w);
Witness witness_from_json(const nlohmann::json& j);

} // namespace stineq

#endif // STINEQ_DECIDE_HPP_
