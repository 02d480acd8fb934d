/* term.hpp -- omega-term syntax: parsing, powers, decompositions, the mu
 * measure, rewriting toward aperiodic equality, canonical forms over the
 * J-trivial monoids, and subword automata.
 */

#ifndef STINEQ_TERM_HPP_
#define STINEQ_TERM_HPP_

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stineq/automata.hpp"

namespace stineq {

enum class TermKind { Identity, Letter, Concat, OmegaPower };

class OmegaTerm;
using TermPtr = std::shared_ptr<const OmegaTerm>;

/**
 * A finite rooted term tree over letters a..z, the identity 1, binary
 * concatenation and the unary omega power. Nodes are immutable and
 * freely shared; structural equality is decidable and deliberately finer
 * than equality of the represented omega-words (concatenation is not
 * associative at the tree level).
 */
class OmegaTerm {
public:
    static TermPtr identity();
    static TermPtr letter(char symbol);
    static TermPtr concat(TermPtr left, TermPtr right);
    static TermPtr omega(TermPtr base);

    TermKind kind() const { return kind_; }
    char symbol() const { return symbol_; }
    const TermPtr& left() const { return left_; }
    const TermPtr& right() const { return right_; }
    const TermPtr& base() const { return left_; }
    /// Number of tree nodes.
    std::size_t size() const { return size_; }

private:
    OmegaTerm(TermKind kind, char symbol, TermPtr left, TermPtr right);

    TermKind kind_;
    char symbol_ = 0;
    TermPtr left_;
    TermPtr right_;
    std::size_t size_ = 1;
};

bool structurally_equal(const TermPtr& a, const TermPtr& b);

/// Letters occurring in the term, in increasing order.
std::set<char> letters_of(const TermPtr& t);

struct ParseError : std::runtime_error {
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " at position " + std::to_string(position)),
          position(position) {}
    std::size_t position;
};

/**
 * Parses the term grammar
 *
 *   term   := factor {factor}
 *   factor := atom ["^w" | "^" INT]
 *   atom   := LETTER | "1" | "(" term ")"
 *
 * Whitespace is ignored, juxtaposition concatenates and associates to the
 * left, and "^k" with k >= 1 expands through power(). Throws ParseError
 * with the offending position; "^0" is rejected.
 */
TermPtr parse_term(std::string_view text);

/// Inverse of parse_term up to structural equality; parenthesizes exactly
/// where the tree shape is not implied by left association.
std::string format_term(const TermPtr& t);

/// The k-fold power s^1 = s, s^{k+1} = s^k * s. Throws std::invalid_argument
/// for k = 0 (callers omit zero-power factors instead).
TermPtr power(const TermPtr& t, unsigned k);

/**
 * An exponent that is either a non-negative integer or omega. Totally
 * ordered with omega on top; addition treats omega as absorbing.
 */
struct Exponent {
    static constexpr unsigned kOmega = ~0u;
    unsigned value = 0;

    static constexpr Exponent omega() { return Exponent{kOmega}; }
    constexpr bool is_omega() const { return value == kOmega; }

    friend constexpr Exponent operator+(Exponent a, Exponent b) {
        if (a.is_omega() || b.is_omega()) return omega();
        return Exponent{a.value + b.value};
    }
    friend constexpr auto operator<=>(Exponent a, Exponent b) = default;
};

/// A two-way split of a term; both components evaluate back to the split
/// term in every finite aperiodic monoid.
struct Decomposition {
    TermPtr left;
    TermPtr right;
};

/**
 * All decompositions of t, with the integer exponents attached to omega
 * powers restricted to {0, ..., exp_bound} (omega itself is always
 * included). Structural duplicates are merged; the result is sorted by
 * combined node count, then by rendered text.
 */
std::vector<Decomposition> decompositions(const TermPtr& t, unsigned exp_bound);

/**
 * The depth measure (mu_omega, mu_ell): the largest number of omega powers
 * on a branch, and the number of right descendants above the topmost
 * omega power on such a branch. Compared lexicographically.
 */
struct MuPair {
    unsigned mu_omega = 0;
    unsigned mu_ell = 0;

    friend constexpr auto operator<=>(MuPair, MuPair) = default;
    friend constexpr MuPair operator+(MuPair a, MuPair b) {
        return MuPair{a.mu_omega + b.mu_omega, a.mu_ell + b.mu_ell};
    }
    std::string str() const;
};

MuPair mu(const TermPtr& t);

/**
 * A term as a flat factor sequence: concatenation is associated away,
 * identity factors are dropped, and omega powers keep flat bases. The
 * empty sequence is the identity.
 */
struct FlatFactor;
using FlatSeq = std::vector<FlatFactor>;

struct FlatFactor {
    char letter = 0; // 0 marks an omega power
    FlatSeq base;

    bool is_omega() const { return letter == 0; }
    friend bool operator==(const FlatFactor&, const FlatFactor&);
};

FlatSeq flatten(const TermPtr& t);
TermPtr unflatten(const FlatSeq& seq); // left-associated tree

/**
 * Rewrites t toward a normal form that is equivalent over the finite
 * aperiodic monoids. Flattens, then applies innermost-first and
 * leftmost-first until no rule fires or the step budget runs out:
 *
 *   (x^w)^w        -> x^w
 *   (x^r)^w        -> x^w          (base a literal r-fold repetition, r >= 2)
 *   1^w            -> 1
 *   x^w x^w        -> x^w
 *   x x^w, x^w x   -> x^w          (adjacent factors spell the base)
 *   (p q)^w p      -> p (q p)^w    (p a nonempty proper prefix of the base)
 *
 * A budget of 0 selects 10 * nodes^2, which the rules cannot exhaust; a
 * smaller explicit budget returns the last reduct, which is still sound.
 */
TermPtr normalize_a(const TermPtr& t, std::size_t step_budget = 0);

/**
 * Canonical form over the J-trivial monoids: an alternating sequence of
 * letters and omega blocks, where a block stands for the omega power of
 * the product of its content letters in increasing order. Every atom next
 * to a block has a letter outside that block, and adjacent blocks are
 * incomparable.
 */
struct JCanonicalForm {
    struct Atom {
        bool is_block = false;
        char letter = 0;           // when !is_block
        std::set<char> content;    // when is_block; nonempty
        friend bool operator==(const Atom&, const Atom&) = default;
    };
    std::vector<Atom> atoms;

    friend bool operator==(const JCanonicalForm&, const JCanonicalForm&) = default;
    /// Rendered as parseable text, e.g. "a (ab)^w"; the empty form is "1".
    std::string str() const;
    TermPtr to_term() const;
};

JCanonicalForm canonical_j(const TermPtr& t);

/**
 * An automaton accepting exactly the finite subwords of the omega-word of
 * t: the canonical form is turned into a chain where a letter contributes
 * an optional edge and a block a state with self-loops over its content.
 */
Nfa subword_nfa(const TermPtr& t);

/// Whether w embeds into t as a scattered subword.
bool subword_of(std::string_view w, const TermPtr& t);

} // namespace stineq

#endif // STINEQ_TERM_HPP_
