#include <algorithm>
#include <functional>

#include "treetop/error.hpp"
#include "treetop/transforms.hpp"

namespace treetop {

namespace {

std::vector<TypeParam> makeParams(std::size_t rank, const std::string& base, Variance v) {
    std::vector<TypeParam> params;
    for (std::size_t i = 0; i < rank; ++i) params.push_back({rank == 1 ? base : base + std::to_string(i + 1), v});
    return params;
}

}  // namespace

EncodedTable gnfCftgToClassTable(const Cftg& g, const GnfEncodingOptions& options) {
    validateCftg(g);
    if (GnfReport r = isGnf(g); !r.gnf)
        throw Error(kNotGnf, "production " + std::to_string(r.violations.front() + 1) + " has no terminal root");
    if (g.emptyTree) throw Error(kInvalidArgument, "a class table cannot carry a separate empty tree");

    EncodedTable out;
    for (const RankedSymbol& t : g.terminals) {
        out.table.add({t.name, makeParams(t.rank, options.paramBase, Variance::Covariant), {}});
        out.split.sup.insert(t.name);
    }
    for (const RankedSymbol& v : g.variables) {
        ClassDecl decl{v.name, makeParams(v.rank, options.paramBase, Variance::Invariant), {}};
        for (const CftgProduction& p : g.productions) {
            if (p.lhs != v.name) continue;
            Substitution rename;
            for (std::size_t i = 0; i < p.params.size(); ++i) rename.emplace(p.params[i], Term::param(decl.params[i].name));
            Term super = applySubst(p.rhs, rename);
            if (options.dedup && std::find(decl.supertypes.begin(), decl.supertypes.end(), super) != decl.supertypes.end())
                continue;
            decl.supertypes.push_back(super);
        }
        out.table.add(std::move(decl));
    }
    out.bottom = g.initial;
    return out;
}

bool unifiable(const Term& a, const Term& b) {
    Substitution s;
    auto resolve = [&](Term t) {
        while (t.isParam()) {
            auto it = s.find(t.name());
            if (it == s.end()) break;
            t = it->second;
        }
        return t;
    };
    std::function<bool(const std::string&, const Term&)> occurs = [&](const std::string& x, const Term& t) {
        Term r = resolve(t);
        if (r.isParam()) return r.name() == x;
        return std::any_of(r.children().begin(), r.children().end(), [&](const Term& c) { return occurs(x, c); });
    };
    std::vector<std::pair<Term, Term>> work{{a, b}};
    while (!work.empty()) {
        auto [l, r] = work.back();
        work.pop_back();
        l = resolve(l);
        r = resolve(r);
        if (l == r) continue;
        if (!l.isParam() && r.isParam()) std::swap(l, r);
        if (l.isParam()) {
            if (occurs(l.name(), r)) return false;
            s.emplace(l.name(), r);
            continue;
        }
        if (l.name() != r.name() || l.arity() != r.arity()) return false;
        for (std::size_t i = 0; i < l.arity(); ++i) work.emplace_back(l.child(i), r.child(i));
    }
    return true;
}

std::vector<std::pair<std::size_t, std::size_t>> unifiableSupertypes(const ClassDecl& decl) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < decl.supertypes.size(); ++i)
        for (std::size_t j = i + 1; j < decl.supertypes.size(); ++j)
            if (unifiable(decl.supertypes[i], decl.supertypes[j])) out.emplace_back(i, j);
    return out;
}

}  // namespace treetop
