/* equality.cpp */

#include "stineq/equality.hpp"

namespace stineq {

bool equal_over_a_syntactic(const TermPtr& t1, const TermPtr& t2) {
    return flatten(normalize_a(t1)) == flatten(normalize_a(t2));
}

AperiodicEquality equal_over_a(const TermPtr& t1, const TermPtr& t2, unsigned refute_size) {
    if (equal_over_a_syntactic(t1, t2)) return {EqualityVerdict::Equal, std::nullopt};
    if (refute_size > 0) {
        for (const OrderedMonoid& m : monoid_tables_up_to(refute_size)) {
            if (!is_aperiodic(m)) continue;
            // A violation either way separates the terms, since the discrete
            // order makes "below" mean "equal".
            if (auto hit = find_violation(m, t1, t2)) {
                return {EqualityVerdict::Distinct,
                        DistinctWitness{m, hit->assignment, hit->lhs_value, hit->rhs_value}};
            }
        }
    }
    return {EqualityVerdict::Unknown, std::nullopt};
}

} // namespace stineq
