#include "engine.hpp"
#include "treetop/error.hpp"

namespace treetop {

namespace detail {

namespace {

// Without contravariance a subtype judgement never needs to swap sides, so
// the right-hand type shrinks at every recursive step and the search ends
// without a cycle ledger. Each step picks one reflexive-transitive
// inheritance fact for the left root that lands on the right root.
class NonContravariantSearch {
public:
    NonContravariantSearch(const TableFacts& facts, DecideStats* stats) : facts_(facts), stats_(stats) {}

    bool eval(const Term& l, const Term& r, Relation rel) {
        switch (rel) {
            case Relation::Eq: return l == r;
            case Relation::Sub: return sub(l, r);
            case Relation::Sup: return sub(r, l);
        }
        return false;
    }

    ProofTrace trace(const Term& l, const Term& r, Relation rel) const {
        if (rel == Relation::Eq) return ProofTrace{ProofTrace::Rule::Refl, {l, r, rel}, {}, 0, {}};
        if (rel == Relation::Sup) {
            ProofTrace node{ProofTrace::Rule::Mirror, {l, r, rel}, {}, 0, {}};
            node.premises.push_back(trace(r, l, Relation::Sub));
            return node;
        }
        if (l == r) return reflexiveTrace(facts_.table(), l, Relation::Sub);

        const Inheritance& inh = facts_.closure(l.name()).at(memo_.at(keyOf(l, r, rel)).choice);
        std::vector<Term> lefts{l};
        for (const InheritanceStep& step : inh.path) {
            const Term& cur = lefts.back();
            const ClassDecl& decl = facts_.table().at(cur.name());
            lefts.push_back(applySubst(decl.supertypes[step.superIndex], decl.bind(cur)));
        }

        const Term& top = lefts.back();
        const ClassDecl& target = facts_.table().at(top.name());
        ProofTrace node{ProofTrace::Rule::Var, {top, r, Relation::Sub}, {}, 0, {}};
        for (std::size_t i = 0; i < top.arity(); ++i)
            node.premises.push_back(trace(top.child(i), r.child(i), relationFor(target.varianceAt(i))));

        for (std::size_t k = inh.path.size(); k-- > 0;) {
            ProofTrace step{ProofTrace::Rule::Super, {lefts[k], r, Relation::Sub}, inh.path[k].className,
                            inh.path[k].superIndex, {}};
            step.premises.push_back(std::move(node));
            node = std::move(step);
        }
        return node;
    }

private:
    struct Entry {
        bool holds = false;
        std::size_t choice = 0;
    };

    bool sub(const Term& l, const Term& r) {
        if (l == r) return true;
        JudgementKey key = keyOf(l, r, Relation::Sub);
        if (auto it = memo_.find(key); it != memo_.end()) {
            if (stats_) ++stats_->memoHits;
            return it->second.holds;
        }
        if (stats_) ++stats_->expansions;

        const auto& facts = facts_.closure(l.name());
        Substitution bind;
        bool bound = false;
        Entry result;
        for (std::size_t k = 0; k < facts.size() && !result.holds; ++k) {
            const Term& target = facts[k].target;
            if (target.name() != r.name()) continue;
            if (!bound) {
                bind = facts_.table().at(l.name()).bind(l);
                bound = true;
            }
            const ClassDecl& decl = facts_.table().at(target.name());
            bool ok = true;
            for (std::size_t i = 0; ok && i < target.arity(); ++i) {
                Term arg = applySubst(target.child(i), bind);
                ok = decl.varianceAt(i) == Variance::Covariant ? sub(arg, r.child(i)) : arg == r.child(i);
            }
            if (ok) result = {true, k};
        }
        memo_.emplace(key, result);
        return result.holds;
    }

    const TableFacts& facts_;
    DecideStats* stats_;
    std::unordered_map<JudgementKey, Entry, JudgementKeyHash> memo_;
};

}  // namespace

Verdict runNonContravariant(const TableFacts& facts, const Judgement& goal, const DecideOptions& options) {
    NonContravariantSearch search(facts, options.stats);
    if (!search.eval(goal.left, goal.right, goal.rel)) return Fails{};
    Holds h;
    if (options.withTrace)
        h.trace = std::make_shared<const ProofTrace>(search.trace(goal.left, goal.right, goal.rel));
    return h;
}

}  // namespace detail

Verdict decideNonContravariant(const ClassTable& table, const SubtypeQuery& query, const DecideOptions& options) {
    requireWellFormed(table);
    validateQuery(table, query);
    if (hasContravariance(table))
        throw Error(kFragmentRefused, "table has contravariant parameters");
    detail::TableFacts facts(table);
    return detail::runNonContravariant(facts, query.judgement(), options);
}

}  // namespace treetop
