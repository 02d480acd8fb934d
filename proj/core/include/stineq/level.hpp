/* level.hpp -- hierarchy levels and work budgets. */

#ifndef STINEQ_LEVEL_HPP_
#define STINEQ_LEVEL_HPP_

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace stineq {

/**
 * A level of the concatenation hierarchy, stored as twice its value so
 * that half levels (1/2, 3/2, ...) are exact. Level{0} is the bottom.
 */
struct Level {
    unsigned twice = 0;

    constexpr bool is_integer() const { return twice % 2 == 0; }
    constexpr bool is_half() const { return twice % 2 == 1; }

    /// The half level directly below an integer level (twice - 1).
    constexpr Level previous_half() const { return Level{twice - 1}; }
    /// The level one full step down (used for axiom side conditions).
    constexpr Level minus_one() const { return Level{twice - 2}; }

    friend constexpr auto operator<=>(Level, Level) = default;

    /// Accepts "3/2", "1.5" and "2"; throws std::invalid_argument otherwise.
    static Level parse(const std::string& text);
    /// Renders integer levels as "n" and half levels as "n/2".
    std::string str() const;
};

/**
 * Work limits for the semi-decision machinery. All counters are upper
 * bounds; exhausting one never causes an error, only an Unknown verdict.
 */
struct Budget {
    /// Goal expansions the proof search may perform.
    std::size_t proof_expansions = 2000;
    /// Languages the refuter may draw from the level enumeration.
    std::size_t languages = 64;
    /// Rewrite steps per normalization call; 0 picks 10 * nodes^2.
    std::size_t rewrite_steps = 0;
    /// Syntactic ordered monoids larger than this are skipped by the refuter.
    std::size_t monoid_cap = 64;
    /// Largest integer exponent used when enumerating decompositions.
    unsigned exp_bound = 2;
    /// Dovetailing slice sizes: prover expansions / refuter languages per round.
    std::size_t prover_slice = 256;
    std::size_t refuter_slice = 8;

    Budget scaled(std::size_t factor) const {
        Budget b = *this;
        b.proof_expansions *= factor;
        b.languages *= factor;
        return b;
    }
};

} // namespace stineq

#endif // STINEQ_LEVEL_HPP_
