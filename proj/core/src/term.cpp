/* term.cpp */

#include "stineq/term.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace stineq {

OmegaTerm::OmegaTerm(TermKind kind, char symbol, TermPtr left, TermPtr right)
    : kind_(kind), symbol_(symbol), left_(std::move(left)), right_(std::move(right)) {
    size_ = 1;
    if (left_) size_ += left_->size();
    if (right_) size_ += right_->size();
}

TermPtr OmegaTerm::identity() {
    static const TermPtr one(new OmegaTerm(TermKind::Identity, 0, nullptr, nullptr));
    return one;
}

TermPtr OmegaTerm::letter(char symbol) {
    if (symbol < 'a' || symbol > 'z') throw std::invalid_argument("letter out of a..z");
    return TermPtr(new OmegaTerm(TermKind::Letter, symbol, nullptr, nullptr));
}

TermPtr OmegaTerm::concat(TermPtr left, TermPtr right) {
    if (!left || !right) throw std::invalid_argument("null operand");
    return TermPtr(new OmegaTerm(TermKind::Concat, 0, std::move(left), std::move(right)));
}

TermPtr OmegaTerm::omega(TermPtr base) {
    if (!base) throw std::invalid_argument("null operand");
    return TermPtr(new OmegaTerm(TermKind::OmegaPower, 0, std::move(base), nullptr));
}

bool structurally_equal(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind() != b->kind() || a->size() != b->size()) return false;
    switch (a->kind()) {
        case TermKind::Identity: return true;
        case TermKind::Letter: return a->symbol() == b->symbol();
        case TermKind::Concat:
            return structurally_equal(a->left(), b->left()) &&
                   structurally_equal(a->right(), b->right());
        case TermKind::OmegaPower: return structurally_equal(a->base(), b->base());
    }
    return false;
}

std::set<char> letters_of(const TermPtr& t) {
    std::set<char> out;
    auto walk = [&](auto&& self, const TermPtr& node) -> void {
        switch (node->kind()) {
            case TermKind::Identity: return;
            case TermKind::Letter: out.insert(node->symbol()); return;
            case TermKind::Concat:
                self(self, node->left());
                self(self, node->right());
                return;
            case TermKind::OmegaPower: self(self, node->base()); return;
        }
    };
    walk(walk, t);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing and printing

namespace {

constexpr unsigned kMaxLiteralExponent = 4096;

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    TermPtr run() {
        TermPtr t = parse_sequence();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected character");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool starts_atom() {
        skip_space();
        if (pos_ >= text_.size()) return false;
        char c = text_[pos_];
        return c == '(' || c == '1' || (c >= 'a' && c <= 'z');
    }

    TermPtr parse_sequence() {
        skip_space();
        if (!starts_atom()) fail("expected a term");
        TermPtr acc = parse_factor();
        while (starts_atom()) acc = OmegaTerm::concat(acc, parse_factor());
        return acc;
    }

    TermPtr parse_factor() {
        TermPtr atom = parse_atom();
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '^') {
            ++pos_;
            skip_space();
            if (pos_ >= text_.size()) fail("expected exponent after '^'");
            if (text_[pos_] == 'w') {
                ++pos_;
                return OmegaTerm::omega(atom);
            }
            if (!std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                fail("expected 'w' or an integer after '^'");
            }
            unsigned k = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                k = k * 10 + static_cast<unsigned>(text_[pos_] - '0');
                if (k > kMaxLiteralExponent) fail("exponent too large");
                ++pos_;
            }
            if (k == 0) fail("exponent 0 is not allowed");
            return power(atom, k);
        }
        return atom;
    }

    TermPtr parse_atom() {
        skip_space();
        if (pos_ >= text_.size()) fail("expected an atom");
        char c = text_[pos_];
        if (c == '1') {
            ++pos_;
            return OmegaTerm::identity();
        }
        if (c >= 'a' && c <= 'z') {
            ++pos_;
            return OmegaTerm::letter(c);
        }
        if (c == '(') {
            std::size_t open = pos_;
            ++pos_;
            TermPtr inner = parse_sequence();
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] != ')') {
                pos_ = open;
                fail("unbalanced parenthesis");
            }
            ++pos_;
            return inner;
        }
        fail("expected a letter, '1' or '('");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void format_into(const TermPtr& t, std::string& out, bool as_atom, bool as_factor);

void format_atom(const TermPtr& t, std::string& out) {
    switch (t->kind()) {
        case TermKind::Identity: out.push_back('1'); return;
        case TermKind::Letter: out.push_back(t->symbol()); return;
        default:
            out.push_back('(');
            format_into(t, out, false, false);
            out.push_back(')');
            return;
    }
}

void format_into(const TermPtr& t, std::string& out, bool as_atom, bool as_factor) {
    if (as_atom) {
        format_atom(t, out);
        return;
    }
    switch (t->kind()) {
        case TermKind::OmegaPower:
            format_atom(t->base(), out);
            out += "^w";
            return;
        case TermKind::Concat:
            if (as_factor) {
                format_atom(t, out);
            } else {
                format_into(t->left(), out, false, false);
                out.push_back(' ');
                format_into(t->right(), out, false, true);
            }
            return;
        default: format_atom(t, out); return;
    }
}

} // namespace

TermPtr parse_term(std::string_view text) { return Parser(text).run(); }

std::string format_term(const TermPtr& t) {
    std::string out;
    format_into(t, out, false, false);
    return out;
}

TermPtr power(const TermPtr& t, unsigned k) {
    if (k == 0) throw std::invalid_argument("power exponent must be positive");
    TermPtr acc = t;
    for (unsigned i = 1; i < k; ++i) acc = OmegaTerm::concat(acc, t);
    return acc;
}

// ---------------------------------------------------------------------------
// Decompositions

namespace {

// s^k * tail and head * s^k with the zero power omitted; kOmega means s^w.
TermPtr prepend_power(const TermPtr& s, Exponent k, const TermPtr& tail) {
    if (k == Exponent{0}) return tail;
    TermPtr p = k.is_omega() ? OmegaTerm::omega(s) : power(s, k.value);
    return OmegaTerm::concat(p, tail);
}

TermPtr append_power(const TermPtr& head, const TermPtr& s, Exponent k) {
    if (k == Exponent{0}) return head;
    TermPtr p = k.is_omega() ? OmegaTerm::omega(s) : power(s, k.value);
    return OmegaTerm::concat(head, p);
}

void collect_decompositions(const TermPtr& t, unsigned exp_bound,
                            std::vector<Decomposition>& out) {
    switch (t->kind()) {
        case TermKind::Identity:
        case TermKind::Letter:
            out.push_back({OmegaTerm::identity(), t});
            out.push_back({t, OmegaTerm::identity()});
            return;
        case TermKind::Concat: {
            std::vector<Decomposition> left, right;
            collect_decompositions(t->left(), exp_bound, left);
            collect_decompositions(t->right(), exp_bound, right);
            for (const auto& d : left) {
                out.push_back({d.left, OmegaTerm::concat(d.right, t->right())});
            }
            for (const auto& d : right) {
                out.push_back({OmegaTerm::concat(t->left(), d.left), d.right});
            }
            return;
        }
        case TermKind::OmegaPower: {
            const TermPtr& s = t->base();
            std::vector<Decomposition> inner;
            collect_decompositions(s, exp_bound, inner);
            std::vector<Exponent> exps;
            for (unsigned v = 0; v <= exp_bound; ++v) exps.push_back(Exponent{v});
            exps.push_back(Exponent::omega());
            for (const auto& d : inner) {
                for (Exponent k : exps) {
                    for (Exponent l : exps) {
                        if (!k.is_omega() && !l.is_omega()) continue;
                        out.push_back({prepend_power(s, k, d.left),
                                       append_power(d.right, s, l)});
                    }
                }
            }
            return;
        }
    }
}

} // namespace

std::vector<Decomposition> decompositions(const TermPtr& t, unsigned exp_bound) {
    std::vector<Decomposition> raw;
    collect_decompositions(t, exp_bound, raw);

    std::map<std::pair<std::string, std::string>, Decomposition> unique;
    for (auto& d : raw) {
        unique.emplace(std::make_pair(format_term(d.left), format_term(d.right)),
                       std::move(d));
    }
    std::vector<std::pair<std::pair<std::string, std::string>, Decomposition>> items(
        std::make_move_iterator(unique.begin()), std::make_move_iterator(unique.end()));
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        std::size_t sa = a.second.left->size() + a.second.right->size();
        std::size_t sb = b.second.left->size() + b.second.right->size();
        if (sa != sb) return sa < sb;
        return a.first < b.first;
    });
    std::vector<Decomposition> out;
    out.reserve(items.size());
    for (auto& item : items) out.push_back(std::move(item.second));
    return out;
}

// ---------------------------------------------------------------------------
// The mu measure

std::string MuPair::str() const {
    return "(" + std::to_string(mu_omega) + "," + std::to_string(mu_ell) + ")";
}

MuPair mu(const TermPtr& t) {
    switch (t->kind()) {
        case TermKind::Identity:
        case TermKind::Letter: return {0, 0};
        case TermKind::OmegaPower: return {mu(t->base()).mu_omega + 1, 0};
        case TermKind::Concat: {
            MuPair l = mu(t->left());
            MuPair r = mu(t->right());
            if (t->right()->kind() != TermKind::OmegaPower) r = r + MuPair{0, 1};
            return std::max(l, r);
        }
    }
    return {0, 0};
}

// ---------------------------------------------------------------------------
// Flat sequences and normalization

bool operator==(const FlatFactor& a, const FlatFactor& b) {
    return a.letter == b.letter && a.base == b.base;
}

namespace {

void flatten_into(const TermPtr& t, FlatSeq& out) {
    switch (t->kind()) {
        case TermKind::Identity: return;
        case TermKind::Letter: out.push_back(FlatFactor{t->symbol(), {}}); return;
        case TermKind::Concat:
            flatten_into(t->left(), out);
            flatten_into(t->right(), out);
            return;
        case TermKind::OmegaPower: {
            FlatFactor f;
            flatten_into(t->base(), f.base);
            out.push_back(std::move(f));
            return;
        }
    }
}

std::size_t flat_size(const FlatSeq& seq) {
    std::size_t n = 0;
    for (const auto& f : seq) n += f.is_omega() ? 1 + flat_size(f.base) : 1;
    return n;
}

// Smallest period of the factor sequence that divides its length.
std::size_t primitive_period(const FlatSeq& seq) {
    for (std::size_t p = 1; p <= seq.size(); ++p) {
        if (seq.size() % p != 0) continue;
        bool periodic = true;
        for (std::size_t i = p; i < seq.size() && periodic; ++i) {
            periodic = seq[i] == seq[i - p];
        }
        if (periodic) return p;
    }
    return seq.size();
}

bool range_equals(const FlatSeq& seq, std::size_t from, const FlatSeq& pattern,
                  std::size_t pat_len) {
    if (from + pat_len > seq.size()) return false;
    for (std::size_t i = 0; i < pat_len; ++i) {
        if (!(seq[from + i] == pattern[i])) return false;
    }
    return true;
}

struct Rewriter {
    std::size_t steps_left;

    bool spend() {
        if (steps_left == 0) return false;
        --steps_left;
        return true;
    }

    // One rewrite anywhere in the sequence, innermost bases before the
    // enclosing sequence and leftmost position first.
    bool step_anywhere(FlatSeq& seq) {
        for (auto& f : seq) {
            if (f.is_omega() && step_anywhere(f.base)) return true;
        }
        return step_top(seq);
    }

    bool step_top(FlatSeq& seq) {
        for (std::size_t i = 0; i < seq.size(); ++i) {
            FlatFactor& f = seq[i];
            if (!f.is_omega()) continue;
            // 1^w -> 1
            if (f.base.empty()) {
                if (!spend()) return false;
                seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(i));
                return true;
            }
            // (x^w)^w -> x^w
            if (f.base.size() == 1 && f.base[0].is_omega()) {
                if (!spend()) return false;
                FlatFactor inner = std::move(f.base[0]);
                f = std::move(inner);
                return true;
            }
            // (x^r)^w -> x^w for a literal r-fold repetition
            if (std::size_t p = primitive_period(f.base); p < f.base.size()) {
                if (!spend()) return false;
                f.base.resize(p);
                return true;
            }
            const FlatSeq base = f.base;
            const std::size_t blen = base.size();
            // x^w x^w -> x^w
            if (i + 1 < seq.size() && seq[i + 1].is_omega() && seq[i + 1].base == base) {
                if (!spend()) return false;
                seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(i + 1));
                return true;
            }
            // x^w x -> x^w
            if (range_equals(seq, i + 1, base, blen)) {
                if (!spend()) return false;
                seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(i + 1),
                          seq.begin() + static_cast<std::ptrdiff_t>(i + 1 + blen));
                return true;
            }
            // x x^w -> x^w
            if (i >= blen && range_equals(seq, i - blen, base, blen)) {
                if (!spend()) return false;
                seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(i - blen),
                          seq.begin() + static_cast<std::ptrdiff_t>(i));
                return true;
            }
            // (p q)^w p -> p (q p)^w, pulling the shortest matching prefix left
            for (std::size_t plen = 1; plen < blen; ++plen) {
                if (!range_equals(seq, i + 1, base, plen)) continue;
                if (!spend()) return false;
                FlatSeq rotated(base.begin() + static_cast<std::ptrdiff_t>(plen), base.end());
                rotated.insert(rotated.end(), base.begin(),
                               base.begin() + static_cast<std::ptrdiff_t>(plen));
                FlatFactor block;
                block.base = std::move(rotated);
                seq[i] = std::move(block);
                seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(i + 1),
                          seq.begin() + static_cast<std::ptrdiff_t>(i + 1 + plen));
                for (std::size_t j = 0; j < plen; ++j) {
                    seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(i + j), base[j]);
                }
                return true;
            }
        }
        return false;
    }
};

} // namespace

FlatSeq flatten(const TermPtr& t) {
    FlatSeq out;
    flatten_into(t, out);
    return out;
}

TermPtr unflatten(const FlatSeq& seq) {
    if (seq.empty()) return OmegaTerm::identity();
    TermPtr acc;
    for (const auto& f : seq) {
        TermPtr piece = f.is_omega() ? OmegaTerm::omega(unflatten(f.base))
                                     : OmegaTerm::letter(f.letter);
        acc = acc ? OmegaTerm::concat(std::move(acc), std::move(piece)) : std::move(piece);
    }
    return acc;
}

TermPtr normalize_a(const TermPtr& t, std::size_t step_budget) {
    FlatSeq seq = flatten(t);
    std::size_t budget = step_budget ? step_budget : 10 * t->size() * t->size();
    Rewriter rw{budget};
    while (rw.steps_left > 0 && rw.step_anywhere(seq)) {
    }
    return unflatten(seq);
}

// ---------------------------------------------------------------------------
// Canonical forms over the J-trivial monoids

std::string JCanonicalForm::str() const {
    if (atoms.empty()) return "1";
    std::string out;
    for (const auto& atom : atoms) {
        if (!out.empty()) out.push_back(' ');
        if (!atom.is_block) {
            out.push_back(atom.letter);
        } else if (atom.content.size() == 1) {
            out.push_back(*atom.content.begin());
            out += "^w";
        } else {
            out.push_back('(');
            for (char c : atom.content) out.push_back(c);
            out += ")^w";
        }
    }
    return out;
}

TermPtr JCanonicalForm::to_term() const {
    TermPtr acc;
    for (const auto& atom : atoms) {
        TermPtr piece;
        if (!atom.is_block) {
            piece = OmegaTerm::letter(atom.letter);
        } else {
            TermPtr word;
            for (char c : atom.content) {
                TermPtr l = OmegaTerm::letter(c);
                word = word ? OmegaTerm::concat(std::move(word), std::move(l)) : std::move(l);
            }
            piece = OmegaTerm::omega(std::move(word));
        }
        acc = acc ? OmegaTerm::concat(std::move(acc), std::move(piece)) : std::move(piece);
    }
    return acc ? acc : OmegaTerm::identity();
}

namespace {

void collect_atoms(const TermPtr& t, std::vector<JCanonicalForm::Atom>& out) {
    switch (t->kind()) {
        case TermKind::Identity: return;
        case TermKind::Letter:
            out.push_back({false, t->symbol(), {}});
            return;
        case TermKind::Concat:
            collect_atoms(t->left(), out);
            collect_atoms(t->right(), out);
            return;
        case TermKind::OmegaPower: {
            std::set<char> content = letters_of(t->base());
            if (!content.empty()) out.push_back({true, 0, std::move(content)});
            return;
        }
    }
}

bool subset(const std::set<char>& a, const std::set<char>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // namespace

JCanonicalForm canonical_j(const TermPtr& t) {
    JCanonicalForm form;
    collect_atoms(t, form.atoms);
    auto& atoms = form.atoms;

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
            auto& a = atoms[i];
            auto& b = atoms[i + 1];
            if (!a.is_block && b.is_block && b.content.count(a.letter)) {
                atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(i));
            } else if (a.is_block && !b.is_block && a.content.count(b.letter)) {
                atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(i + 1));
            } else if (a.is_block && b.is_block && subset(a.content, b.content)) {
                atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(i));
            } else if (a.is_block && b.is_block && subset(b.content, a.content)) {
                atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(i + 1));
            } else {
                continue;
            }
            changed = true;
            break;
        }
    }
    return form;
}

// ---------------------------------------------------------------------------
// Subword automata

Nfa subword_nfa(const TermPtr& t) {
    JCanonicalForm form = canonical_j(t);
    Nfa nfa;
    nfa.state_count = form.atoms.size() + 1;
    nfa.initial = {0};
    nfa.accepting = {form.atoms.size()};
    for (std::size_t i = 0; i < form.atoms.size(); ++i) {
        const auto& atom = form.atoms[i];
        if (atom.is_block) {
            for (char c : atom.content) nfa.transitions.push_back({i, c, i});
            nfa.transitions.push_back({i, 0, i + 1});
        } else {
            nfa.transitions.push_back({i, atom.letter, i + 1});
            nfa.transitions.push_back({i, 0, i + 1});
        }
    }
    return nfa;
}

bool subword_of(std::string_view w, const TermPtr& t) {
    return nfa_accepts(subword_nfa(t), w);
}

} // namespace stineq
