/* equality.hpp -- sound partial test for equality of omega-terms over the
 * finite aperiodic monoids: bounded rewriting for the positive side,
 * exhaustive small-monoid refutation for the negative side.
 */

#ifndef STINEQ_EQUALITY_HPP_
#define STINEQ_EQUALITY_HPP_

#include <optional>

#include "stineq/monoid.hpp"
#include "stineq/term.hpp"

namespace stineq {

enum class EqualityVerdict { Equal, Distinct, Unknown };

struct DistinctWitness {
    OrderedMonoid monoid; // aperiodic, discretely ordered
    Assignment assignment;
    std::size_t lhs_value;
    std::size_t rhs_value;
};

struct AperiodicEquality {
    EqualityVerdict verdict;
    std::optional<DistinctWitness> witness; // set when Distinct
};

/**
 * Equal when both normal forms coincide, Distinct when some aperiodic
 * monoid with at most refute_size elements separates the terms under some
 * assignment, Unknown otherwise. Both answers are sound; refute_size 0
 * skips the search and never answers Distinct.
 */
AperiodicEquality equal_over_a(const TermPtr& t1, const TermPtr& t2,
                               unsigned refute_size = 3);

/// Just the positive side: normal forms coincide.
bool equal_over_a_syntactic(const TermPtr& t1, const TermPtr& t2);

} // namespace stineq

#endif // STINEQ_EQUALITY_HPP_
