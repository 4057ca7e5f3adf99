#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <unordered_map>

#include "../subtyping/engine.hpp"
#include "treetop/error.hpp"
#include "treetop/transforms.hpp"

namespace treetop {

std::string QueryAtom::str() const { return type.str() + " " + relationSymbol(rel) + " x"; }

namespace {

// One way to satisfy a goal: an atom set per child position of the
// terminal being tried.
using Requirement = std::vector<QuerySet>;
using Alternatives = std::vector<Requirement>;

constexpr std::size_t kNoLow = std::numeric_limits<std::size_t>::max();

// Ground subtyping with a memo; cyclic proofs count as failures.
class GroundOracle {
public:
    explicit GroundOracle(const ClassTable& table) : subtyper_(table) {}

    bool holds(const Term& l, const Term& r, Relation rel) {
        if (rel == Relation::Eq) return l == r;
        auto key = detail::keyOf(l, r, rel);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        DecideOptions options;
        options.withTrace = false;
        bool ok = treetop::holds(subtyper_.decide(SubtypeQuery{l, r, rel, {}}, options));
        memo_.emplace(key, ok);
        return ok;
    }

private:
    Subtyper subtyper_;
    std::unordered_map<detail::JudgementKey, bool, detail::JudgementKeyHash> memo_;
};

// Drops atoms implied by the others; nullopt when the atoms contradict.
std::optional<QuerySet> simplify(const QuerySet& atoms, GroundOracle& oracle) {
    std::vector<Term> below, above;
    std::optional<Term> equal;
    for (const QueryAtom& a : atoms) {
        switch (a.rel) {
            case Relation::Sub: below.push_back(a.type); break;
            case Relation::Sup: above.push_back(a.type); break;
            case Relation::Eq:
                if (equal && *equal != a.type) return std::nullopt;
                equal = a.type;
                break;
        }
    }
    if (equal) {
        for (const Term& t : below)
            if (!oracle.holds(t, *equal, Relation::Sub)) return std::nullopt;
        for (const Term& t : above)
            if (!oracle.holds(*equal, t, Relation::Sub)) return std::nullopt;
        return QuerySet{{*equal, Relation::Eq}};
    }
    // t <: x <: t' needs t <: t'.
    for (const Term& lo : below)
        for (const Term& hi : above)
            if (!oracle.holds(lo, hi, Relation::Sub)) return std::nullopt;

    // Keep the strongest bounds: t1 <: x implies t2 <: x when t2 <: t1.
    auto keepStrongest = [&](const std::vector<Term>& bounds, bool lower) {
        std::vector<Term> kept;
        for (std::size_t i = 0; i < bounds.size(); ++i) {
            bool implied = false;
            for (std::size_t j = 0; j < bounds.size() && !implied; ++j) {
                if (i == j) continue;
                const Term& stronger = bounds[j];
                bool covers = lower ? oracle.holds(bounds[i], stronger, Relation::Sub)
                                    : oracle.holds(stronger, bounds[i], Relation::Sub);
                if (!covers) continue;
                bool mutual = lower ? oracle.holds(stronger, bounds[i], Relation::Sub)
                                    : oracle.holds(bounds[i], stronger, Relation::Sub);
                // Of two equivalent bounds keep the first in canonical order.
                implied = !mutual || j < i;
            }
            if (!implied) kept.push_back(bounds[i]);
        }
        return kept;
    };
    QuerySet out;
    for (const Term& t : keepStrongest(below, true)) out.insert({t, Relation::Sub});
    for (const Term& t : keepStrongest(above, false)) out.insert({t, Relation::Sup});
    return out;
}

bool coveredBy(const Requirement& weaker, const Requirement& stronger) {
    for (std::size_t i = 0; i < weaker.size(); ++i)
        if (!std::includes(stronger[i].begin(), stronger[i].end(), weaker[i].begin(), weaker[i].end())) return false;
    return true;
}

// Sorted, duplicate free, without requirements that another one implies.
void minimize(Alternatives& alts) {
    std::sort(alts.begin(), alts.end());
    alts.erase(std::unique(alts.begin(), alts.end()), alts.end());
    std::vector<bool> dominated(alts.size(), false);
    for (std::size_t i = 0; i < alts.size(); ++i)
        for (std::size_t j = 0; j < alts.size() && !dominated[i]; ++j)
            dominated[i] = j != i && coveredBy(alts[j], alts[i]);
    Alternatives kept;
    for (std::size_t i = 0; i < alts.size(); ++i)
        if (!dominated[i]) kept.push_back(std::move(alts[i]));
    alts = std::move(kept);
}

// Proof search for goals with one ground side and one side built from the
// unknowns #1..#n, each unknown standing for a child of the terminal being
// tried. The answer lists the atom sets on the unknowns under which the
// goal has a finite proof.
class SymbolicSolver {
public:
    SymbolicSolver(const ClassTable& table, const std::map<std::string, std::set<std::string>>& reach,
                   GroundOracle& oracle, std::size_t rank)
        : table_(table), reach_(reach), oracle_(oracle), rank_(rank) {}

    Alternatives solve(const Term& l, const Term& r, Relation rel) {
        std::size_t low = kNoLow;
        return search(l, r, rel, low);
    }

    Alternatives conjoin(const Alternatives& a, const Alternatives& b) {
        Alternatives out;
        for (const Requirement& x : a)
            for (const Requirement& y : b) {
                Requirement joined(rank_);
                bool ok = true;
                for (std::size_t i = 0; i < rank_ && ok; ++i) {
                    QuerySet both = x[i];
                    both.insert(y[i].begin(), y[i].end());
                    auto s = simplify(both, oracle_);
                    if (s) joined[i] = std::move(*s);
                    else ok = false;
                }
                if (ok) out.push_back(std::move(joined));
            }
        minimize(out);
        return out;
    }

    Alternatives unconditional() const { return {Requirement(rank_)}; }

private:
    std::size_t unknownIndex(const Term& t) const { return std::stoul(t.name().substr(1)) - 1; }

    Alternatives single(const Term& unknown, QueryAtom atom) const {
        Requirement r(rank_);
        r[unknownIndex(unknown)].insert(std::move(atom));
        return {r};
    }

    Alternatives equal(const Term& l, const Term& r) {
        if (l == r) return unconditional();
        if (l.isParam()) return single(l, {r, Relation::Eq});
        if (r.isParam()) return single(r, {l, Relation::Eq});
        if (l.isGround() && r.isGround()) return {};
        if (l.name() != r.name() || l.arity() != r.arity()) return {};
        Alternatives acc = unconditional();
        for (std::size_t i = 0; i < l.arity() && !acc.empty(); ++i) acc = conjoin(acc, equal(l.child(i), r.child(i)));
        return acc;
    }

    Alternatives search(Term l, Term r, Relation rel, std::size_t& low) {
        if (rel == Relation::Sup) {
            std::swap(l, r);
            rel = Relation::Sub;
        }
        if (l.isGround() && r.isGround()) return oracle_.holds(l, r, rel) ? unconditional() : Alternatives{};
        if (rel == Relation::Eq) return equal(l, r);
        if (l.isParam()) return single(l, {r, Relation::Sup});
        if (r.isParam()) return single(r, {l, Relation::Sub});

        const auto key = detail::keyOf(l, r, rel);
        if (auto p = path_.find(key); p != path_.end()) {
            low = std::min(low, p->second);
            return {};
        }
        if (auto m = memo_.find(key); m != memo_.end()) return m->second;

        const std::size_t depth = path_.size();
        path_.emplace(key, depth);
        std::size_t innerLow = kNoLow;
        Alternatives out;
        const ClassDecl& decl = table_.at(l.name());
        if (l.name() == r.name()) {
            Alternatives acc = unconditional();
            for (std::size_t i = 0; i < l.arity() && !acc.empty(); ++i)
                acc = conjoin(acc, search(l.child(i), r.child(i), relationFor(decl.varianceAt(i)), innerLow));
            out = std::move(acc);
        } else {
            const Substitution binding = decl.bind(l);
            for (const Term& super : decl.supertypes) {
                if (super.name() != r.name() && !reach_.at(super.name()).count(r.name())) continue;
                Alternatives more = search(applySubst(super, binding), r, Relation::Sub, innerLow);
                out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
            }
            minimize(out);
        }
        path_.erase(key);

        if (innerLow >= depth) memo_.emplace(key, out);
        else low = std::min(low, innerLow);
        return out;
    }

    const ClassTable& table_;
    const std::map<std::string, std::set<std::string>>& reach_;
    GroundOracle& oracle_;
    std::size_t rank_;
    std::unordered_map<detail::JudgementKey, std::size_t, detail::JudgementKeyHash> path_;
    std::unordered_map<detail::JudgementKey, Alternatives, detail::JudgementKeyHash> memo_;
};

struct RawProduction {
    std::size_t lhs;
    std::string terminal;
    std::vector<std::size_t> children;
};

}  // namespace

QueryGrammar extractRtg(const ClassTable& table, const Term& bottom, const std::set<std::string>& sigmaTop) {
    requireWellFormed(table);
    if (isExpansive(table)) throw Error(kFragmentRefused, "expansive tables have no regular extraction");
    checkGroundType(table, bottom);
    for (const std::string& s : sigmaTop) table.at(s);

    std::vector<const ClassDecl*> terminals;
    for (const ClassDecl& d : table.decls())
        if (sigmaTop.empty() || sigmaTop.count(d.name)) terminals.push_back(&d);

    std::map<std::string, std::set<std::string>> reach;
    for (const ClassDecl& d : table.decls()) reach.emplace(d.name, superClassNames(table, d.name));

    GroundOracle oracle(table);
    std::vector<SymbolicSolver> solvers;
    std::vector<Term> shapes;  // sigma(#1, ..., #n)
    for (const ClassDecl* d : terminals) {
        solvers.emplace_back(table, reach, oracle, d->rank());
        std::vector<Term> unknowns;
        for (std::size_t i = 0; i < d->rank(); ++i) unknowns.push_back(Term::param("#" + std::to_string(i + 1)));
        shapes.push_back(Term::node(d->name, std::move(unknowns)));
    }

    std::vector<QuerySet> sets{QuerySet{{bottom, Relation::Sub}}};
    std::map<QuerySet, std::size_t> ids{{sets[0], 0}};
    std::vector<RawProduction> raw;
    for (std::size_t v = 0; v < sets.size(); ++v) {
        for (std::size_t k = 0; k < terminals.size(); ++k) {
            SymbolicSolver& solver = solvers[k];
            Alternatives alts = solver.unconditional();
            for (const QueryAtom& atom : sets[v]) {
                if (alts.empty()) break;
                alts = solver.conjoin(alts, solver.solve(atom.type, shapes[k], atom.rel));
            }
            for (const Requirement& req : alts) { 
                RawProduction p{v, terminals[k]->name, {}};
                for (const QuerySet& child : req) {
                    auto [it, added] = ids.emplace(child, sets.size());
                    if (added) sets.push_back(child);
                    p.children.push_back(it->second);
                }
                raw.push_back(std::move(p));
            }
        }
    }

    // Keep productive variables reachable from the start, then number them
    // in discovery order.
    std::vector<bool> productive(sets.size(), false);
    for (bool changed = true; changed;) {
        changed = false;
        for (const RawProduction& p : raw)
            if (!productive[p.lhs] &&
                std::all_of(p.children.begin(), p.children.end(), [&](std::size_t c) { return productive[c]; }))
                productive[p.lhs] = changed = true;
    }
    std::vector<bool> reachable(sets.size(), false);
    reachable[0] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (const RawProduction& p : raw) {
            if (!reachable[p.lhs] || !productive[p.lhs]) continue;
            if (!std::all_of(p.children.begin(), p.children.end(), [&](std::size_t c) { return productive[c]; }))
                continue;
            for (std::size_t c : p.children)
                if (!reachable[c]) reachable[c] = changed = true;
        }
    }

    std::string prefix = "v";
    auto clashes = [&](const std::string& p) {
        return std::any_of(terminals.begin(), terminals.end(), [&](const ClassDecl* d) {
            return d->name.size() > p.size() && d->name.rfind(p, 0) == 0 &&
                   std::all_of(d->name.begin() + static_cast<std::ptrdiff_t>(p.size()), d->name.end(),
                               [](char c) { return c >= '0' && c <= '9'; });
        });
    };
    while (clashes(prefix)) prefix += "_";

    std::vector<std::string> names(sets.size());
    QueryGrammar out;
    for (std::size_t v = 0, next = 0; v < sets.size(); ++v) {
        if (v != 0 && !(reachable[v] && productive[v])) continue;
        names[v] = prefix + std::to_string(next++);
        out.grammar.variables.push_back(names[v]);
        out.meaning.emplace(names[v], sets[v]);
    }
    for (const ClassDecl* d : terminals) out.grammar.terminals.push_back({d->name, d->rank()});
    out.grammar.start = names[0];
    for (const RawProduction& p : raw) {
        if (names[p.lhs].empty() || !productive[p.lhs] || !reachable[p.lhs]) continue;
        if (!std::all_of(p.children.begin(), p.children.end(), [&](std::size_t c) { return productive[c]; }))
            continue;
        std::vector<Term> kids;
        for (std::size_t c : p.children) kids.push_back(Term::leaf(names[c]));
        out.grammar.productions.push_back({names[p.lhs], Term::node(p.terminal, std::move(kids))});
    }
    return out;
}

RegularTreeGrammar classTableToRtg(const ClassTable& table, const Term& bottom, const std::set<std::string>& sigmaTop) {
    return extractRtg(table, bottom, sigmaTop).grammar;
}

}  // namespace treetop
