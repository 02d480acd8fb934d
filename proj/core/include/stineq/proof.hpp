/* proof.hpp -- the four-rule inequational calculus: axiom instances over a
 * side-condition oracle, proof checking, and budgeted goal-directed search.
 */

#ifndef STINEQ_PROOF_HPP_
#define STINEQ_PROOF_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stineq/level.hpp"
#include "stineq/term.hpp"

namespace stineq {

struct Inequality {
    TermPtr lhs;
    TermPtr rhs;
};

/**
 * One derivation step. The rules:
 *
 *   Trivial          both sides are equal over the aperiodic monoids
 *   Gamma(u, v)      the step is u^w <= u^w v u^w and v <= u is valid at
 *                    the level one below
 *   Mul(j, k)        sides are the products of the sides of steps j and k
 *   Omega(j)         sides are the omega powers of the sides of step j
 *   Trans(j, k)      lhs_j, rhs_j = lhs_k, rhs_k = the step's sides
 *
 * Cited indices must be strictly smaller than the step's own index. All
 * side comparisons are taken modulo normalization over the aperiodic
 * monoids.
 */
struct Justification {
    enum class Rule { Trivial, Gamma, Mul, Omega, Trans };
    Rule rule = Rule::Trivial;
    TermPtr u, v;              // Gamma
    std::size_t first = 0;     // Mul/Trans: j, Omega: j
    std::size_t second = 0;    // Mul/Trans: k
};

struct ProofStep {
    Inequality ineq;
    Justification why;
};

/// A nonempty step list; the conclusion is the last step's inequality.
struct Proof {
    Level level{3};
    std::vector<ProofStep> steps;

    const Inequality& conclusion() const { return steps.back().ineq; }
};

enum class Tri { Yes, No, Unknown };

/**
 * Side condition of an axiom instance u^w <= u^w v u^w at the given level:
 * decides (exactly at 1/2, by budgeted recursion above) whether v <= u is
 * valid at level - 1.
 */
Tri gamma_axiom_check(const TermPtr& u, const TermPtr& v, Level level,
                      const Budget& budget = {});

struct CheckResult {
    bool valid = false;
    std::size_t failed_step = 0; // when invalid
    std::string reason;
};

/// Verifies every step; an undischargeable side condition is a failure.
CheckResult check_proof(const Proof& proof, const Budget& budget = {});

struct SearchOutcome {
    std::optional<Proof> proof; // empty means not found within budget
    std::size_t expansions_used = 0;
    bool search_space_exhausted = false; // no proof at this exponent bound
};

/**
 * Deterministic goal-directed search: tries the trivial rule, direct axiom
 * instances on the normalized shape, the omega rule, and products over the
 * decompositions of the right side (smallest first), with a transitivity
 * bridge for axiom instances buried under a context. A result always
 * passes check_proof; not finding one is never a refutation.
 */
SearchOutcome search_proof(const Inequality& goal, Level level, const Budget& budget = {});

/**
 * Resumable search for dovetailing: each run() grants additional goal
 * expansions and replays deterministically, so the sequence of outcomes
 * depends only on the cumulative budget.
 */
class ProverSession {
public:
    ProverSession(Inequality goal, Level level, Budget budget);
    ~ProverSession();
    ProverSession(ProverSession&&) noexcept;

    enum class State { Running, Found, Exhausted };

    /// Runs up to extra_expansions more goal expansions.
    State run(std::size_t extra_expansions);

    const std::optional<Proof>& proof() const;
    std::size_t expansions_used() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

nlohmann::json proof_to_json(const Proof& proof);
Proof proof_from_json(const nlohmann::json& j);

} // namespace stineq

#endif // STINEQ_PROOF_HPP_
