/* proof.cpp */

#include "stineq/proof.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include <nlohmann/json.hpp>

#include "stineq/decide.hpp"
#include "stineq/equality.hpp"

namespace stineq {

// ---------------------------------------------------------------------------
// Axiom side conditions

Tri gamma_axiom_check(const TermPtr& u, const TermPtr& v, Level level, const Budget& budget) {
    if (level.twice < 3 || !level.is_half()) {
        throw std::invalid_argument("axioms live at half levels >= 3/2");
    }
    static std::mutex mu;
    static std::map<std::tuple<std::string, std::string, unsigned>, Tri> cache;
    auto key = std::make_tuple(format_term(normalize_a(v)), format_term(normalize_a(u)),
                               level.twice);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    // The side condition v <= u is taken one full level down; below 3/2 the
    // recursion bottoms out in the exact subword procedure.
    Budget sub = budget;
    sub.proof_expansions = std::max<std::size_t>(1, sub.proof_expansions / 2);
    sub.languages = std::max<std::size_t>(1, sub.languages / 2);
    Verdict verdict = decide(v, u, level.minus_one(), sub);

    Tri result = Tri::Unknown;
    if (verdict.kind == Verdict::Kind::Holds) result = Tri::Yes;
    if (verdict.kind == Verdict::Kind::Fails) result = Tri::No;
    if (result != Tri::Unknown) {
        // Unknown is budget-dependent; definite answers are not.
        std::lock_guard<std::mutex> lock(mu);
        cache.emplace(std::move(key), result);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Proof checking

namespace {

TermPtr gamma_rhs(const TermPtr& u, const TermPtr& v) {
    return OmegaTerm::concat(OmegaTerm::concat(OmegaTerm::omega(u), v), OmegaTerm::omega(u));
}

} // namespace

CheckResult check_proof(const Proof& proof, const Budget& budget) {
    if (proof.steps.empty()) return {false, 0, "proof has no steps"};
    if (proof.level.twice < 3 || !proof.level.is_half()) {
        return {false, 0, "proof level must be a half level >= 3/2"};
    }
    for (std::size_t i = 0; i < proof.steps.size(); ++i) {
        const ProofStep& step = proof.steps[i];
        const Justification& why = step.why;
        auto fail = [&](const std::string& reason) -> CheckResult { return {false, i, reason}; };
        auto same_over_a = [&](const TermPtr& a, const TermPtr& b) {
            return equal_over_a_syntactic(a, b);
        };
        switch (why.rule) {
            case Justification::Rule::Trivial:
                if (!same_over_a(step.ineq.lhs, step.ineq.rhs)) {
                    return fail("sides are not provably equal over the aperiodic monoids");
                }
                break;
            case Justification::Rule::Gamma: {
                if (!why.u || !why.v) return fail("axiom instance needs terms u and v");
                if (!same_over_a(step.ineq.lhs, OmegaTerm::omega(why.u))) {
                    return fail("left side is not u^w");
                }
                if (!same_over_a(step.ineq.rhs, gamma_rhs(why.u, why.v))) {
                    return fail("right side is not u^w v u^w");
                }
                Tri side = gamma_axiom_check(why.u, why.v, proof.level, budget);
                if (side == Tri::No) return fail("side condition v <= u fails one level down");
                if (side == Tri::Unknown) return fail("side condition v <= u undischarged");
                break;
            }
            case Justification::Rule::Mul: {
                if (why.first >= i || why.second >= i) return fail("cited step out of range");
                const Inequality& a = proof.steps[why.first].ineq;
                const Inequality& b = proof.steps[why.second].ineq;
                if (!same_over_a(step.ineq.lhs, OmegaTerm::concat(a.lhs, b.lhs))) {
                    return fail("left side is not the product of the cited left sides");
                }
                if (!same_over_a(step.ineq.rhs, OmegaTerm::concat(a.rhs, b.rhs))) {
                    return fail("right side is not the product of the cited right sides");
                }
                break;
            }
            case Justification::Rule::Omega: {
                if (why.first >= i) return fail("cited step out of range");
                const Inequality& a = proof.steps[why.first].ineq;
                if (!same_over_a(step.ineq.lhs, OmegaTerm::omega(a.lhs))) {
                    return fail("left side is not the omega power of the cited left side");
                }
                if (!same_over_a(step.ineq.rhs, OmegaTerm::omega(a.rhs))) {
                    return fail("right side is not the omega power of the cited right side");
                }
                break;
            }
            case Justification::Rule::Trans: {
                if (why.first >= i || why.second >= i) return fail("cited step out of range");
                const Inequality& a = proof.steps[why.first].ineq;
                const Inequality& b = proof.steps[why.second].ineq;
                if (!same_over_a(step.ineq.lhs, a.lhs)) {
                    return fail("left side differs from the first cited left side");
                }
                if (!same_over_a(a.rhs, b.lhs)) {
                    return fail("cited steps do not chain");
                }
                if (!same_over_a(b.rhs, step.ineq.rhs)) {
                    return fail("right side differs from the second cited right side");
                }
                break;
            }
        }
    }
    return {true, 0, {}};
}

// ---------------------------------------------------------------------------
// Goal-directed search

namespace {

struct SubProof {
    // Steps proving one goal; justification indices are local to the vector
    // and the last step carries the goal inequality.
    std::vector<ProofStep> steps;
};

// Appends `sub` to `steps`, shifting its internal citations.
std::size_t splice(std::vector<ProofStep>& steps, const SubProof& sub) {
    std::size_t offset = steps.size();
    for (ProofStep step : sub.steps) {
        switch (step.why.rule) {
            case Justification::Rule::Mul:
            case Justification::Rule::Trans:
                step.why.first += offset;
                step.why.second += offset;
                break;
            case Justification::Rule::Omega: step.why.first += offset; break;
            default: break;
        }
        steps.push_back(std::move(step));
    }
    return steps.size() - 1;
}

} // namespace

struct ProverSession::Impl {
    using State = ProverSession::State;

    Inequality root;
    Level level;
    Budget cfg;

    std::size_t allowance = 0;
    std::size_t used = 0;
    std::optional<Proof> found;
    bool exhausted = false;

    struct Memo {
        bool proved = false;
        SubProof sub;
    };
    std::map<std::string, Memo> memo;
    std::set<std::string> in_progress;
    std::map<std::string, TermPtr> norm_cache;
    std::map<std::string, std::shared_ptr<std::vector<Decomposition>>> dec_cache;
    std::map<std::string, bool> prune_cache;

    struct Abort {};

    TermPtr norm(const TermPtr& t) {
        std::string key = format_term(t);
        auto it = norm_cache.find(key);
        if (it != norm_cache.end()) return it->second;
        TermPtr n = normalize_a(t, cfg.rewrite_steps);
        norm_cache.emplace(std::move(key), n);
        return n;
    }

    std::string goal_key(const TermPtr& lhs, const TermPtr& rhs) {
        return format_term(norm(lhs)) + " <= " + format_term(norm(rhs));
    }

    const std::vector<Decomposition>& decs_of(const TermPtr& t) {
        std::string key = format_term(t);
        auto it = dec_cache.find(key);
        if (it == dec_cache.end()) {
            it = dec_cache
                     .emplace(std::move(key), std::make_shared<std::vector<Decomposition>>(
                                                  decompositions(t, cfg.exp_bound)))
                     .first;
        }
        return *it->second;
    }

    // Provable goals are valid at this level, hence at 1/2; a failed
    // subword inclusion is therefore a definitive dead end.
    bool passes_half_level(const TermPtr& lhs, const TermPtr& rhs, const std::string& key) {
        auto it = prune_cache.find(key);
        if (it != prune_cache.end()) return it->second;
        std::set<char> letters = letters_of(lhs);
        std::set<char> more = letters_of(rhs);
        letters.insert(more.begin(), more.end());
        std::vector<char> alphabet(letters.begin(), letters.end());
        if (alphabet.empty()) alphabet.push_back('a');
        Dfa du = determinize(subword_nfa(lhs), alphabet);
        Dfa dv = determinize(subword_nfa(rhs), alphabet);
        bool ok = dfa_included(du, dv).included;
        prune_cache.emplace(key, ok);
        return ok;
    }

    Tri gamma(const TermPtr& u, const TermPtr& v) {
        return gamma_axiom_check(u, v, level, cfg);
    }

    std::optional<SubProof> dfs(const TermPtr& lhs, const TermPtr& rhs) {
        std::string key = goal_key(lhs, rhs);
        if (auto it = memo.find(key); it != memo.end()) {
            if (it->second.proved) return it->second.sub;
            return std::nullopt;
        }
        if (in_progress.count(key)) return std::nullopt;
        if (used >= allowance) throw Abort{};
        ++used;
        in_progress.insert(key);
        std::optional<SubProof> result;
        try {
            result = expand(lhs, rhs, key);
        } catch (...) {
            in_progress.erase(key);
            throw;
        }
        in_progress.erase(key);
        Memo entry;
        entry.proved = result.has_value();
        if (result) entry.sub = *result;
        memo.emplace(std::move(key), std::move(entry));
        return result;
    }

    std::optional<SubProof> expand(const TermPtr& lhs, const TermPtr& rhs,
                                   const std::string& key) {
        const TermPtr nl = norm(lhs);
        const TermPtr nr = norm(rhs);
        const FlatSeq fl = flatten(nl);
        const FlatSeq fr = flatten(nr);

        // Trivial rule.
        if (fl == fr) {
            SubProof sub;
            sub.steps.push_back({{lhs, rhs}, {Justification::Rule::Trivial, nullptr, nullptr}});
            return sub;
        }

        if (!passes_half_level(lhs, rhs, key)) return std::nullopt;

        bool lhs_is_block = fl.size() == 1 && fl[0].is_omega();

        if (lhs_is_block) {
            TermPtr base_term = unflatten(fl[0].base);
            TermPtr block_term = unflatten(fl);

            // Direct axiom instance on the normalized shape u^w v u^w.
            if (fr.size() >= 3 && fr.front() == fl[0] && fr.back() == fl[0]) {
                FlatSeq middle(fr.begin() + 1, fr.end() - 1);
                TermPtr v_term = unflatten(middle);
                if (gamma(base_term, v_term) == Tri::Yes) {
                    SubProof sub;
                    sub.steps.push_back(
                        {{lhs, rhs}, {Justification::Rule::Gamma, base_term, v_term}});
                    return sub;
                }
            }

            // Omega rule: both sides single blocks, lifted from some power of
            // the base (any power represents the same omega word).
            if (fr.size() == 1 && fr[0].is_omega()) {
                TermPtr target = unflatten(fr[0].base);
                unsigned max_r = static_cast<unsigned>(
                    std::min<std::size_t>(4, std::max<std::size_t>(1, fr[0].base.size())));
                for (unsigned r = 1; r <= max_r; ++r) {
                    TermPtr lifted = power(base_term, r);
                    if (goal_key(lifted, target) == key) continue;
                    if (auto sub = dfs(lifted, target)) {
                        SubProof out = std::move(*sub);
                        std::size_t cited = out.steps.size() - 1;
                        out.steps.push_back(
                            {{lhs, rhs}, {Justification::Rule::Omega, nullptr, nullptr, cited}});
                        return out;
                    }
                }
            }

            // Splitting the block against decompositions of the right side.
            const std::vector<Decomposition>& decs = decs_of(nr);
            std::vector<std::pair<TermPtr, TermPtr>> cuts = {
                {base_term, block_term}, {block_term, base_term}, {block_term, block_term}};
            for (const auto& [a1, a2] : cuts) {
                if (auto sub = try_mul(lhs, rhs, a1, a2, decs, key)) return sub;
            }

            // Axiom under a context: u^w <= r1 (u^w v u^w <= r1 r2 r3) via a
            // transitivity bridge, with v := r2 checked one level down.
            if (auto sub = axiom_bridge(lhs, rhs, base_term, block_term, key)) return sub;
            return std::nullopt;
        }

        // Concatenations split at the root against decompositions of the
        // right side.
        if (lhs->kind() == TermKind::Concat) {
            const std::vector<Decomposition>& decs = decs_of(nr);
            return try_mul(lhs, rhs, lhs->left(), lhs->right(), decs, key);
        }

        // A letter or the identity admits nothing beyond the trivial rule.
        return std::nullopt;
    }

    std::optional<SubProof> try_mul(const TermPtr& lhs, const TermPtr& rhs, const TermPtr& a1,
                                    const TermPtr& a2, const std::vector<Decomposition>& decs,
                                    const std::string& key) {
        if (!equal_over_a_syntactic(lhs, OmegaTerm::concat(a1, a2))) return std::nullopt;
        for (const Decomposition& d : decs) {
            if (!equal_over_a_syntactic(rhs, OmegaTerm::concat(d.left, d.right))) continue;
            if (goal_key(a1, d.left) == key || goal_key(a2, d.right) == key) continue;
            auto left = dfs(a1, d.left);
            if (!left) continue;
            auto right = dfs(a2, d.right);
            if (!right) continue;
            SubProof out;
            std::size_t j = splice(out.steps, *left);
            std::size_t k = splice(out.steps, *right);
            out.steps.push_back({{lhs, rhs}, {Justification::Rule::Mul, nullptr, nullptr, j, k}});
            return out;
        }
        return std::nullopt;
    }

    std::optional<SubProof> axiom_bridge(const TermPtr& lhs, const TermPtr& rhs,
                                         const TermPtr& base_term, const TermPtr& block_term,
                                         const std::string& key) {
        const TermPtr nr = norm(rhs);
        for (const Decomposition& outer : decs_of(nr)) {
            for (const Decomposition& inner : decs_of(outer.right)) {
                const TermPtr& r1 = outer.left;
                const TermPtr& r2 = inner.left;
                const TermPtr& r3 = inner.right;
                TermPtr recombined =
                    OmegaTerm::concat(OmegaTerm::concat(r1, r2), r3);
                if (!equal_over_a_syntactic(rhs, recombined)) continue;
                if (flatten(norm(r2)).empty()) continue; // covered by plain splits
                if (gamma(base_term, r2) != Tri::Yes) continue;
                if (goal_key(block_term, r1) == key || goal_key(block_term, r3) == key) continue;
                auto left = dfs(block_term, r1);
                if (!left) continue;
                auto right = dfs(block_term, r3);
                if (!right) continue;

                SubProof out;
                TermPtr axiom_rhs = gamma_rhs(base_term, r2);
                out.steps.push_back(
                    {{block_term, axiom_rhs}, {Justification::Rule::Gamma, base_term, r2}});
                std::size_t pos_axiom = 0;
                std::size_t pos_left = splice(out.steps, *left);
                out.steps.push_back(
                    {{r2, r2}, {Justification::Rule::Trivial, nullptr, nullptr}});
                std::size_t pos_mid = out.steps.size() - 1;
                std::size_t pos_right = splice(out.steps, *right);
                out.steps.push_back({{OmegaTerm::concat(block_term, r2),
                                      OmegaTerm::concat(r1, r2)},
                                     {Justification::Rule::Mul, nullptr, nullptr, pos_left,
                                      pos_mid}});
                std::size_t pos_m1 = out.steps.size() - 1;
                out.steps.push_back(
                    {{OmegaTerm::concat(OmegaTerm::concat(block_term, r2), block_term),
                      recombined},
                     {Justification::Rule::Mul, nullptr, nullptr, pos_m1, pos_right}});
                std::size_t pos_m2 = out.steps.size() - 1;
                out.steps.push_back({{lhs, rhs},
                                     {Justification::Rule::Trans, nullptr, nullptr, pos_axiom,
                                      pos_m2}});
                return out;
            }
        }
        return std::nullopt;
    }

    State run(std::size_t extra) {
        allowance += extra;
        if (found) return State::Found;
        if (exhausted) return State::Exhausted;
        in_progress.clear();
        try {
            auto sub = dfs(root.lhs, root.rhs);
            if (sub) {
                Proof proof;
                proof.level = level;
                proof.steps = std::move(sub->steps);
                found = std::move(proof);
                return State::Found;
            }
            exhausted = true;
            return State::Exhausted;
        } catch (Abort&) {
            return State::Running;
        }
    }
};

ProverSession::ProverSession(Inequality goal, Level level, Budget budget)
    : impl_(new Impl{std::move(goal), level, budget}) {
    if (level.twice < 3 || !level.is_half()) {
        throw std::invalid_argument("proof search runs at half levels >= 3/2");
    }
}

ProverSession::~ProverSession() = default;
ProverSession::ProverSession(ProverSession&&) noexcept = default;

ProverSession::State ProverSession::run(std::size_t extra_expansions) {
    return impl_->run(extra_expansions);
}

const std::optional<Proof>& ProverSession::proof() const { return impl_->found; }
std::size_t ProverSession::expansions_used() const { return impl_->used; }

SearchOutcome search_proof(const Inequality& goal, Level level, const Budget& budget) {
    ProverSession session(goal, level, budget);
    ProverSession::State state = session.run(budget.proof_expansions);
    SearchOutcome out;
    out.expansions_used = session.expansions_used();
    out.search_space_exhausted = state == ProverSession::State::Exhausted;
    if (state == ProverSession::State::Found) out.proof = *session.proof();
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json proof_to_json(const Proof& proof) {
    nlohmann::json steps = nlohmann::json::array();
    for (const ProofStep& step : proof.steps) {
        nlohmann::json rule;
        switch (step.why.rule) {
            case Justification::Rule::Trivial: rule = {{"type", "trivial"}}; break;
            case Justification::Rule::Gamma:
                rule = {{"type", "gamma"},
                        {"u", format_term(step.why.u)},
                        {"v", format_term(step.why.v)}};
                break;
            case Justification::Rule::Mul:
                rule = {{"type", "mul"}, {"left", step.why.first}, {"right", step.why.second}};
                break;
            case Justification::Rule::Omega:
                rule = {{"type", "omega"}, {"from", step.why.first}};
                break;
            case Justification::Rule::Trans:
                rule = {{"type", "trans"}, {"first", step.why.first}, {"second", step.why.second}};
                break;
        }
        steps.push_back({{"lhs", format_term(step.ineq.lhs)},
                         {"rhs", format_term(step.ineq.rhs)},
                         {"rule", std::move(rule)}});
    }
    return {{"level", proof.level.str()}, {"steps", std::move(steps)}};
}

Proof proof_from_json(const nlohmann::json& j) {
    Proof proof;
    try {
        proof.level = Level::parse(j.at("level").get<std::string>());
        for (const auto& js : j.at("steps")) {
            ProofStep step;
            step.ineq.lhs = parse_term(js.at("lhs").get<std::string>());
            step.ineq.rhs = parse_term(js.at("rhs").get<std::string>());
            const auto& rule = js.at("rule");
            std::string type = rule.at("type").get<std::string>();
            if (type == "trivial") {
                step.why.rule = Justification::Rule::Trivial;
            } else if (type == "gamma") {
                step.why.rule = Justification::Rule::Gamma;
                step.why.u = parse_term(rule.at("u").get<std::string>());
                step.why.v = parse_term(rule.at("v").get<std::string>());
            } else if (type == "mul") {
                step.why.rule = Justification::Rule::Mul;
                step.why.first = rule.at("left").get<std::size_t>();
                step.why.second = rule.at("right").get<std::size_t>();
            } else if (type == "omega") {
                step.why.rule = Justification::Rule::Omega;
                step.why.first = rule.at("from").get<std::size_t>();
            } else if (type == "trans") {
                step.why.rule = Justification::Rule::Trans;
                step.why.first = rule.at("first").get<std::size_t>();
                step.why.second = rule.at("second").get<std::size_t>();
            } else {
                throw std::invalid_argument("unknown rule type '" + type + "'");
            }
            proof.steps.push_back(std::move(step));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad proof JSON: ") + e.what());
    }
    return proof;
}

} // namespace stineq
