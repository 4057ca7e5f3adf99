#include <limits>

#include "engine.hpp"
#include "treetop/error.hpp"

namespace treetop {

namespace detail {

namespace {

constexpr std::size_t kNoCycle = std::numeric_limits<std::size_t>::max();

// Depth-first proof search over Var and Super. A judgement that repeats on
// the current path can only be derived through itself, so that branch fails.
// A failure is memoized only once no open ancestor contributed to it; later
// lookups of such a failure are final.
class LedgerSearch {
public:
    LedgerSearch(const TableFacts& facts, const DecideOptions& options) : facts_(facts), options_(options) {}

    bool run(const Judgement& goal) { return solve(goal.left, goal.right, goal.rel, 0).holds; }

    bool sawCycle() const { return cycleHits_ > 0; }
    bool hitDepthLimit() const { return hitLimit_; }
    const std::vector<Judgement>& firstCycle() const { return firstCycle_; }

    ProofTrace trace(const Term& l, const Term& r, Relation rel) const {
        if (rel == Relation::Eq) return ProofTrace{ProofTrace::Rule::Refl, {l, r, rel}, {}, 0, {}};
        if (rel == Relation::Sup) {
            ProofTrace node{ProofTrace::Rule::Mirror, {l, r, rel}, {}, 0, {}};
            node.premises.push_back(trace(r, l, Relation::Sub));
            return node;
        }
        if (l == r) return reflexiveTrace(facts_.table(), l, Relation::Sub);
        const Entry& e = memo_.at(keyOf(l, r, rel));
        const ClassDecl& decl = facts_.table().at(l.name());
        if (e.choice == kVar) {
            ProofTrace node{ProofTrace::Rule::Var, {l, r, rel}, {}, 0, {}};
            for (std::size_t i = 0; i < l.arity(); ++i)
                node.premises.push_back(trace(l.child(i), r.child(i), relationFor(decl.varianceAt(i))));
            return node;
        }
        Term next = applySubst(decl.supertypes[e.choice], decl.bind(l));
        ProofTrace node{ProofTrace::Rule::Super, {l, r, rel}, decl.name, e.choice, {}};
        node.premises.push_back(trace(next, r, Relation::Sub));
        return node;
    }

private:
    static constexpr std::size_t kVar = std::numeric_limits<std::size_t>::max();

    struct Entry {
        bool holds = false;
        std::size_t choice = kVar;
        bool cyclic = false;
    };

    struct Outcome {
        bool holds;
        std::size_t low;  // shallowest open ancestor this result depended on
    };

    Outcome solve(const Term& l, const Term& r, Relation rel, std::size_t depth) {
        if (rel == Relation::Sup) return solve(r, l, Relation::Sub, depth);
        if (rel == Relation::Eq || l == r) return {l == r, kNoCycle};

        JudgementKey key = keyOf(l, r, rel);
        if (auto it = memo_.find(key); it != memo_.end()) {
            if (options_.stats) ++options_.stats->memoHits;
            if (it->second.cyclic) ++cycleHits_;
            return {it->second.holds, kNoCycle};
        }
        if (auto it = onPath_.find(key); it != onPath_.end()) {
            if (cycleHits_++ == 0) recordCycle(it->second, {l, r, rel});
            return {false, it->second};
        }
        if (options_.boundedSearch && depth >= options_.depthLimit) {
            hitLimit_ = true;
            return {false, 0};
        }
        if (options_.stats) ++options_.stats->expansions;

        onPath_.emplace(key, depth);
        path_.push_back({l, r, rel});
        std::size_t cyclesBefore = cycleHits_;
        std::size_t low = kNoCycle;
        Entry result;

        const ClassDecl& decl = facts_.table().at(l.name());
        if (l.name() == r.name()) {
            bool ok = true;
            for (std::size_t i = 0; ok && i < l.arity(); ++i) {
                Outcome o = solve(l.child(i), r.child(i), relationFor(decl.varianceAt(i)), depth + 1);
                low = std::min(low, o.low);
                ok = o.holds;
            }
            if (ok) result = {true, kVar, false};
        } else {
            Substitution bind = decl.bind(l);
            for (std::size_t k = 0; k < decl.supertypes.size(); ++k) {
                const Term& sup = decl.supertypes[k];
                if (!facts_.reaches(sup.name(), r.name())) continue;
                Outcome o = solve(applySubst(sup, bind), r, Relation::Sub, depth + 1);
                low = std::min(low, o.low);
                if (o.holds) {
                    result = {true, k, false};
                    break;
                }
            }
        }

        path_.pop_back();
        onPath_.erase(key);
        if (result.holds) {
            memo_.emplace(key, result);
            return {true, kNoCycle};
        }
        if (low >= depth) {
            result.cyclic = cycleHits_ > cyclesBefore;
            memo_.emplace(key, result);
            return {false, kNoCycle};
        }
        return {false, low};
    }

    void recordCycle(std::size_t fromDepth, const Judgement& repeat) {
        firstCycle_.assign(path_.begin() + static_cast<std::ptrdiff_t>(fromDepth), path_.end());
        firstCycle_.push_back(repeat);
    }

    const TableFacts& facts_;
    const DecideOptions& options_;
    std::unordered_map<JudgementKey, Entry, JudgementKeyHash> memo_;
    std::unordered_map<JudgementKey, std::size_t, JudgementKeyHash> onPath_;
    std::vector<Judgement> path_;
    std::size_t cycleHits_ = 0;
    bool hitLimit_ = false;
    std::vector<Judgement> firstCycle_;
};

}  // namespace

Verdict runNonExpansive(const TableFacts& facts, const Judgement& goal, const DecideOptions& options) {
    LedgerSearch search(facts, options);
    if (search.run(goal)) {
        Holds h;
        if (options.withTrace)
            h.trace = std::make_shared<const ProofTrace>(search.trace(goal.left, goal.right, goal.rel));
        return h;
    }
    if (search.hitDepthLimit()) return Undecided{"depth limit reached without a proof"};
    if (search.sawCycle()) return CycleRejected{search.firstCycle()};
    return Fails{};
}

}  // namespace detail

Verdict decideNonExpansive(const ClassTable& table, const SubtypeQuery& query, const DecideOptions& options) {
    requireWellFormed(table);
    validateQuery(table, query);
    if (isExpansive(table)) throw Error(kFragmentRefused, "table has expansive recursion");
    detail::TableFacts facts(table);
    return detail::runNonExpansive(facts, query.judgement(), options);
}

}  // namespace treetop
