#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "treetop/error.hpp"
#include "treetop/grammars.hpp"

namespace treetop {

namespace {

class Deriver {
public:
    Deriver(const Cftg& g, const DeriveOptions& options) : g_(g), options_(options) {
        for (std::size_t i = 0; i < g.productions.size(); ++i) byLhs_[g.productions[i].lhs].push_back(i);
        for (const RankedSymbol& v : g.variables) varNames_.insert(v.name);
    }

    std::set<Term, TermLess> run() {
        std::set<Term, TermLess> results;
        std::vector<Term> frontier;
        auto consider = [&](const Term& t, std::vector<Term>& next) {
            if (committedHeight(t) > static_cast<long>(options_.maxHeight)) return;
            if (!hasVariable(t)) {
                if (t.height() <= options_.maxHeight) results.insert(t);
                return;
            }
            if (!seen_.insert(t).second) return;
            next.push_back(t);
            if (next.size() > options_.frontierCap)
                throw Error(kOverflow, "derivation frontier exceeded " + std::to_string(options_.frontierCap) +
                                           " tree forms");
        };

        consider(g_.initial, frontier);
        if (g_.emptyTree && g_.emptyTree->height() <= options_.maxHeight) results.insert(*g_.emptyTree);
        for (std::size_t step = 0; step < options_.maxSteps && !frontier.empty(); ++step) {
            std::vector<Term> next;
            for (const Term& form : frontier) {
                std::vector<std::vector<std::size_t>> redexes;
                std::vector<std::size_t> path;
                collectRedexes(form, path, redexes);
                for (const auto& at : redexes) {
                    const Term& site = subtermAt(form, at);
                    for (std::size_t idx : byLhs_[site.name()]) {
                        const CftgProduction& p = g_.productions[idx];
                        Substitution s;
                        for (std::size_t i = 0; i < p.params.size(); ++i) s.emplace(p.params[i], site.child(i));
                        consider(replaceAt(form, at, 0, applySubst(p.rhs, s)), next);
                    }
                }
            }
            frontier = std::move(next);
        }
        return results;
    }

private:
    bool isVar(const Term& t) const { return !t.isParam() && varNames_.count(t.name()) > 0; }

    bool hasVariable(const Term& t) {
        if (isVar(t)) return true;
        if (t.arity() == 0) return false;
        if (auto it = hasVarCache_.find(t); it != hasVarCache_.end()) return it->second;
        bool found = std::any_of(t.children().begin(), t.children().end(),
                                 [&](const Term& c) { return hasVariable(c); });
        hasVarCache_.emplace(t, found);
        return found;
    }

    // Height of the variable-free top region; those nodes never move again,
    // so it bounds the height of every tree derived from `t`. -1 if the root
    // is a variable.
    long committedHeight(const Term& t) {
        if (isVar(t)) return -1;
        if (!hasVariable(t)) return static_cast<long>(t.height());
        long h = 0;
        for (const Term& c : t.children()) h = std::max(h, committedHeight(c) + 1);
        return h;
    }

    // Preorder, so the first entry is the leftmost outermost variable.
    void collectRedexes(const Term& t, std::vector<std::size_t>& path,
                        std::vector<std::vector<std::size_t>>& out) {
        if (!options_.allRedexes && !out.empty()) return;
        if (!hasVariable(t)) return;
        if (isVar(t)) {
            out.push_back(path);
            if (!options_.allRedexes) return;
        }
        for (std::size_t i = 0; i < t.arity(); ++i) {
            path.push_back(i);
            collectRedexes(t.child(i), path, out);
            path.pop_back();
        }
    }

    static const Term& subtermAt(const Term& t, const std::vector<std::size_t>& path) {
        const Term* cur = &t;
        for (std::size_t i : path) cur = &cur->child(i);
        return *cur;
    }

    static Term replaceAt(const Term& t, const std::vector<std::size_t>& path, std::size_t depth,
                          const Term& replacement) {
        if (depth == path.size()) return replacement;
        std::vector<Term> kids(t.children().begin(), t.children().end());
        kids[path[depth]] = replaceAt(kids[path[depth]], path, depth + 1, replacement);
        return Term::node(t.name(), std::move(kids));
    }

    const Cftg& g_;
    const DeriveOptions& options_;
    std::map<std::string, std::vector<std::size_t>> byLhs_;
    std::unordered_set<std::string> varNames_;
    std::unordered_set<Term> seen_;
    std::unordered_map<Term, bool> hasVarCache_;
};

}  // namespace

std::set<Term, TermLess> deriveTrees(const Cftg& g, const DeriveOptions& options) {
    validateCftg(g);
    return Deriver(g, options).run();
}

std::set<Term, TermLess> deriveTrees(const RegularTreeGrammar& g, const DeriveOptions& options) {
    return deriveTrees(rtgAsCftg(g), options);
}

}  // namespace treetop
