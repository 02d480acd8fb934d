/* decide.cpp */

#include "stineq/decide.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include <nlohmann/json.hpp>

#include "stineq/equality.hpp"

namespace stineq {

namespace {

std::vector<char> query_alphabet(const TermPtr& u, const TermPtr& v) {
    std::set<char> letters = letters_of(u);
    std::set<char> more = letters_of(v);
    letters.insert(more.begin(), more.end());
    return {letters.begin(), letters.end()};
}

// Refuter stream entry: a language, its automaton alphabet and (unless the
// monoid is over the size cap) its syntactic ordered monoid. Cached per
// (level, alphabet) so repeated queries share the construction work.
struct RefuterItem {
    LangExpr expr;
    std::optional<RecognizedLanguage> synt; // nullopt when over the size cap
    bool end_of_stream = false;
};

std::shared_ptr<const RefuterItem> refuter_item(Level level, const std::vector<char>& alphabet,
                                                std::size_t idx, std::size_t monoid_cap) {
    static std::mutex mu;
    static std::map<std::tuple<unsigned, std::string, std::size_t>,
                    std::vector<std::shared_ptr<const RefuterItem>>>
        cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(level.twice, std::string(alphabet.begin(), alphabet.end()),
                               monoid_cap);
    auto& items = cache[key];
    while (items.size() <= idx) {
        if (!items.empty() && items.back()->end_of_stream) return items.back();
        LevelEnumerator stream(level, alphabet);
        std::optional<LangExpr> expr = stream.at(items.size());
        auto item = std::make_shared<RefuterItem>();
        if (!expr) {
            item->end_of_stream = true;
            items.push_back(std::move(item));
            return items.back();
        }
        item->expr = std::move(*expr);
        RecognizedLanguage synt = syntactic_ordered_monoid(expr_to_dfa(item->expr, alphabet));
        if (synt.monoid.size() <= monoid_cap) item->synt = std::move(synt);
        items.push_back(std::move(item));
    }
    return items[idx];
}

Witness make_witness(const LangExpr& expr, const std::vector<char>& alphabet,
                     const RecognizedLanguage& synt, const Violation& hit) {
    Witness w;
    w.language = expr;
    w.alphabet = alphabet;
    for (const auto& [letter, value] : hit.assignment) {
        w.assignment[letter] = synt.monoid.names[value];
    }
    w.lhs_value = synt.monoid.names[hit.lhs_value];
    w.rhs_value = synt.monoid.names[hit.rhs_value];
    return w;
}

// Resumable refutation shared by refute() and the dovetail loop.
class RefuterSession {
public:
    RefuterSession(TermPtr u, TermPtr v, Level level, const Budget& budget)
        : u_(std::move(u)), v_(std::move(v)), level_(level), budget_(budget),
          alphabet_(query_alphabet(u_, v_)) {}

    // Tries up to `count` more languages; sets the witness on success.
    // Returns false once the language budget or the stream is exhausted.
    bool run(std::size_t count) {
        if (alphabet_.empty()) {
            // Both sides evaluate to the identity everywhere; nothing to find.
            done_ = true;
        }
        while (count > 0 && !done_ && !witness_ && spent_ < budget_.languages) {
            std::shared_ptr<const RefuterItem> item =
                refuter_item(level_, alphabet_, spent_, budget_.monoid_cap);
            if (item->end_of_stream) {
                done_ = true;
                break;
            }
            ++spent_;
            --count;
            if (!item->synt) continue;
            if (auto hit = find_violation(item->synt->monoid, u_, v_)) {
                witness_ = make_witness(item->expr, alphabet_, *item->synt, *hit);
            }
        }
        if (spent_ >= budget_.languages) done_ = true;
        return !done_ || witness_.has_value();
    }

    const std::optional<Witness>& witness() const { return witness_; }
    std::size_t spent() const { return spent_; }
    bool done() const { return done_ && !witness_; }

private:
    TermPtr u_, v_;
    Level level_;
    Budget budget_;
    std::vector<char> alphabet_;
    std::size_t spent_ = 0;
    bool done_ = false;
    std::optional<Witness> witness_;
};

Verdict decide_half_exact(const TermPtr& u, const TermPtr& v) {
    Verdict verdict;
    std::vector<char> alphabet = query_alphabet(u, v);
    if (alphabet.empty()) alphabet.push_back('a');
    Dfa du = determinize(subword_nfa(u), alphabet);
    Dfa dv = determinize(subword_nfa(v), alphabet);
    InclusionResult inc = dfa_included(du, dv);
    if (inc.included) {
        verdict.kind = Verdict::Kind::Holds;
        verdict.procedure = "subword-inclusion";
        return verdict;
    }
    // The witness word yields a subword language separating the sides.
    LangExpr expr = subword_language(inc.witness);
    RecognizedLanguage synt = syntactic_ordered_monoid(expr_to_dfa(expr, alphabet));
    Assignment natural;
    for (char c : alphabet) natural[c] = synt.letter_images.at(c);
    std::size_t a = eval(synt.monoid, natural, u);
    std::size_t b = eval(synt.monoid, natural, v);
    Violation hit{std::move(natural), a, b};
    verdict.kind = Verdict::Kind::Fails;
    verdict.witness = make_witness(expr, alphabet, synt, hit);
    return verdict;
}

Verdict decide_integer(const TermPtr& u, const TermPtr& v, Level level, const Budget& budget) {
    Level half = level.previous_half();
    Verdict forward = decide(u, v, half, budget);
    if (forward.kind == Verdict::Kind::Fails) {
        Verdict out = forward; // the witness stays valid one level up
        out.procedure.clear();
        if (out.witness) out.witness->language.level = level;
        return out;
    }
    Verdict backward = decide(v, u, half, budget);
    Verdict out;
    out.spent.proof_expansions = forward.spent.proof_expansions + backward.spent.proof_expansions;
    out.spent.languages = forward.spent.languages + backward.spent.languages;
    if (backward.kind == Verdict::Kind::Fails) {
        // A monoid violating v <= u violates u <= v with the order reversed;
        // the complement language has exactly that dual syntactic monoid.
        Witness flipped = *backward.witness;
        LangExpr complemented = LangExpr::complement_of(flipped.language, level);
        RecognizedLanguage synt =
            syntactic_ordered_monoid(expr_to_dfa(complemented, flipped.alphabet));
        Assignment assignment;
        for (const auto& [letter, name] : flipped.assignment) {
            for (std::size_t i = 0; i < synt.monoid.size(); ++i) {
                if (synt.monoid.names[i] == name) assignment[letter] = i;
            }
        }
        std::size_t a = eval(synt.monoid, assignment, u);
        std::size_t b = eval(synt.monoid, assignment, v);
        Violation hit{std::move(assignment), a, b};
        out.kind = Verdict::Kind::Fails;
        out.witness = make_witness(complemented, flipped.alphabet, synt, hit);
        return out;
    }
    if (forward.kind == Verdict::Kind::Holds && backward.kind == Verdict::Kind::Holds) {
        out.kind = Verdict::Kind::Holds;
        out.procedure = "conjunction";
        out.parts = {std::move(forward), std::move(backward)};
        return out;
    }
    out.kind = Verdict::Kind::Unknown;
    out.exhausted_first = forward.kind == Verdict::Kind::Unknown ? forward.exhausted_first
                                                                 : backward.exhausted_first;
    return out;
}

Verdict decide_dovetailed(const TermPtr& u, const TermPtr& v, Level level, Budget budget) {
    budget.prover_slice = std::max<std::size_t>(1, budget.prover_slice);
    budget.refuter_slice = std::max<std::size_t>(1, budget.refuter_slice);
    ProverSession prover(Inequality{u, v}, level, budget);
    RefuterSession refuter(u, v, level, budget);

    Verdict verdict;
    bool prover_done = false;
    bool refuter_done = false;
    std::string first_exhausted;
    std::size_t prover_granted = 0;

    while (!prover_done || !refuter_done) {
        if (!prover_done) {
            std::size_t slice =
                std::min(budget.prover_slice, budget.proof_expansions - prover_granted);
            prover_granted += slice;
            ProverSession::State state = prover.run(slice);
            if (state == ProverSession::State::Found) {
                verdict.kind = Verdict::Kind::Holds;
                verdict.procedure = "proof";
                verdict.proof = *prover.proof();
                verdict.spent = {prover.expansions_used(), refuter.spent()};
                return verdict;
            }
            if (state == ProverSession::State::Exhausted ||
                prover_granted >= budget.proof_expansions) {
                prover_done = true;
                if (first_exhausted.empty()) first_exhausted = "prover";
            }
        }
        if (!refuter_done) {
            refuter.run(budget.refuter_slice);
            if (refuter.witness()) {
                verdict.kind = Verdict::Kind::Fails;
                verdict.witness = refuter.witness();
                verdict.spent = {prover.expansions_used(), refuter.spent()};
                return verdict;
            }
            if (refuter.done()) {
                refuter_done = true;
                if (first_exhausted.empty()) first_exhausted = "refuter";
            }
        }
    }
    verdict.kind = Verdict::Kind::Unknown;
    verdict.exhausted_first = first_exhausted;
    verdict.spent = {prover.expansions_used(), refuter.spent()};
    return verdict;
}

} // namespace

bool witness_revalidates(const Witness& w, const TermPtr& u, const TermPtr& v) {
    try {
        RecognizedLanguage synt =
            syntactic_ordered_monoid(expr_to_dfa(w.language, w.alphabet));
        Assignment assignment;
        for (const auto& [letter, name] : w.assignment) {
            bool found = false;
            for (std::size_t i = 0; i < synt.monoid.size(); ++i) {
                if (synt.monoid.names[i] == name) {
                    assignment[letter] = i;
                    found = true;
                }
            }
            if (!found) return false;
        }
        std::size_t a = eval(synt.monoid, assignment, u);
        std::size_t b = eval(synt.monoid, assignment, v);
        if (synt.monoid.names[a] != w.lhs_value || synt.monoid.names[b] != w.rhs_value) {
            return false;
        }
        return !synt.monoid.leq[a][b];
    } catch (const std::exception&) {
        return false;
    }
}

Verdict decide(const TermPtr& u, const TermPtr& v, Level level, const Budget& budget) {
    if (level.twice == 0) {
        Verdict verdict;
        verdict.kind = Verdict::Kind::Holds;
        verdict.procedure = "level-0";
        return verdict;
    }
    if (level.twice == 1) return decide_half_exact(u, v);
    if (level.is_integer()) return decide_integer(u, v, level, budget);
    return decide_dovetailed(u, v, level, budget);
}

std::optional<Witness> refute(const TermPtr& u, const TermPtr& v, Level level,
                              const Budget& budget) {
    if (level.twice < 2) {
        throw std::invalid_argument("refutation needs level >= 1");
    }
    RefuterSession session(u, v, level, budget);
    while (session.run(budget.refuter_slice)) {
        if (session.witness()) return session.witness();
    }
    return session.witness();
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json witness_to_json(const Witness& w) {
    nlohmann::json assignment = nlohmann::json::object();
    for (const auto& [letter, name] : w.assignment) {
        assignment[std::string(1, letter)] = name;
    }
    return {{"language", expr_to_json(w.language)},
            {"alphabet", std::string(w.alphabet.begin(), w.alphabet.end())},
            {"assignment", std::move(assignment)},
            {"violation", {{"lhs_value", w.lhs_value}, {"rhs_value", w.rhs_value}}}};
}

Witness witness_from_json(const nlohmann::json& j) {
    Witness w;
    try {
        w.language = expr_from_json(j.at("language"));
        std::string alphabet = j.at("alphabet").get<std::string>();
        w.alphabet.assign(alphabet.begin(), alphabet.end());
        for (const auto& [key, value] : j.at("assignment").items()) {
            if (key.size() != 1) throw std::invalid_argument("assignment key must be a letter");
            w.assignment[key[0]] = value.get<std::string>();
        }
        w.lhs_value = j.at("violation").at("lhs_value").get<std::string>();
        w.rhs_value = j.at("violation").at("rhs_value").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad witness JSON: ") + e.what());
    }
    return w;
}

namespace {

nlohmann::json evidence_to_json(const Verdict& verdict) {
    switch (verdict.kind) {
        case Verdict::Kind::Holds: {
            if (verdict.proof) return {{"proof", proof_to_json(*verdict.proof)}};
            nlohmann::json ev = {{"procedure", verdict.procedure}};
            if (!verdict.parts.empty()) {
                nlohmann::json parts = nlohmann::json::array();
                for (const Verdict& part : verdict.parts) parts.push_back(evidence_to_json(part));
                ev["directions"] = std::move(parts);
            }
            return ev;
        }
        case Verdict::Kind::Fails: return {{"witness", witness_to_json(*verdict.witness)}};
        case Verdict::Kind::Unknown: return {{"exhausted_first", verdict.exhausted_first}};
    }
    return nullptr;
}

} // namespace

nlohmann::json verdict_to_json(const Verdict& verdict, const TermPtr& u, const TermPtr& v,
                               Level level) {
    const char* kind = verdict.kind == Verdict::Kind::Holds    ? "holds"
                       : verdict.kind == Verdict::Kind::Fails ? "fails"
                                                               : "unknown";
    return {{"query",
             {{"lhs", format_term(u)}, {"rhs", format_term(v)}, {"level", level.str()}}},
            {"verdict", kind},
            {"evidence", evidence_to_json(verdict)},
            {"budget_spent",
             {{"proof_expansions", verdict.spent.proof_expansions},
              {"languages", verdict.spent.languages}}}};
}

} // namespace stineq
