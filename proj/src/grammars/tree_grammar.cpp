#include <algorithm>
#include <map>
#include <set>

#include "treetop/error.hpp"
#include "treetop/grammars.hpp"

namespace treetop {

const RankedSymbol* Cftg::findVariable(std::string_view name) const {
    for (const RankedSymbol& v : variables)
        if (v.name == name) return &v;
    return nullptr;
}

const RankedSymbol* Cftg::findTerminal(std::string_view name) const {
    for (const RankedSymbol& t : terminals)
        if (t.name == name) return &t;
    return nullptr;
}

std::string freshName(std::string_view base, const std::function<bool(std::string_view)>& taken) {
    if (!taken(base)) return std::string(base);
    for (std::size_t k = 2;; ++k) {
        std::string candidate = std::string(base) + std::to_string(k);
        if (!taken(candidate)) return candidate;
    }
}

namespace {

void checkSymbols(const Cftg& g, const Term& t, const std::vector<std::string>* params, const std::string& where) {
    if (t.isParam()) {
        if (!params || std::find(params->begin(), params->end(), t.name()) == params->end())
            throw Error(kUnboundParameter, where + ": parameter '" + t.name() + "' is not bound");
        return;
    }
    const RankedSymbol* sym = g.findTerminal(t.name());
    if (!sym) sym = g.findVariable(t.name());
    if (!sym) throw Error(kInvalidArgument, where + ": unknown symbol '" + t.name() + "'");
    if (sym->rank != t.arity())
        throw Error(kArityMismatch, where + ": '" + t.name() + "' has rank " + std::to_string(sym->rank) +
                                        " but " + std::to_string(t.arity()) + " arguments");
    for (const Term& c : t.children()) checkSymbols(g, c, params, where);
}

bool hasVariable(const Cftg& g, const Term& t) {
    if (t.isParam()) return false;
    if (g.isVariable(t.name())) return true;
    return std::any_of(t.children().begin(), t.children().end(),
                       [&](const Term& c) { return hasVariable(g, c); });
}

}  // namespace

void validateCftg(const Cftg& g) {
    std::set<std::string> names;
    for (const RankedSymbol& t : g.terminals)
        if (!names.insert(t.name).second) throw Error(kDuplicateName, "terminal '" + t.name + "' listed twice");
    for (const RankedSymbol& v : g.variables) {
        if (g.findTerminal(v.name))
            throw Error(kNameClash, "'" + v.name + "' is both a terminal and a variable");
        if (!names.insert(v.name).second) throw Error(kDuplicateName, "variable '" + v.name + "' listed twice");
    }
    for (std::size_t i = 0; i < g.productions.size(); ++i) {
        const CftgProduction& p = g.productions[i];
        std::string where = "production " + std::to_string(i) + " (" + p.lhs + ")";
        const RankedSymbol* v = g.findVariable(p.lhs);
        if (!v) throw Error(kInvalidArgument, where + ": left-hand side is not a variable");
        if (v->rank != p.params.size())
            throw Error(kArityMismatch, where + ": expects " + std::to_string(v->rank) + " parameters");
        std::set<std::string> seen(p.params.begin(), p.params.end());
        if (seen.size() != p.params.size()) throw Error(kDuplicateName, where + ": repeated parameter");
        checkSymbols(g, p.rhs, &p.params, where);
    }
    if (!g.initial.valid()) throw Error(kInvalidArgument, "grammar has no initial tree");
    checkSymbols(g, g.initial, nullptr, "initial tree");
    if (g.emptyTree) {
        checkSymbols(g, *g.emptyTree, nullptr, "empty-word tree");
        if (hasVariable(g, *g.emptyTree)) throw Error(kInvalidArgument, "empty-word tree must be terminal");
    }
}

void validateRtg(const RegularTreeGrammar& g) {
    validateCftg(rtgAsCftg(g));
    for (const RtgProduction& p : g.productions) {
        bool ok = !p.rhs.isParam() &&
                  std::any_of(g.terminals.begin(), g.terminals.end(),
                              [&](const RankedSymbol& t) { return t.name == p.rhs.name(); });
        for (const Term& c : p.rhs.children())
            ok = ok && c.arity() == 0 && std::find(g.variables.begin(), g.variables.end(), c.name()) != g.variables.end();
        if (!ok) throw Error(kInvalidArgument, "production of '" + p.lhs + "' is not of the form v -> sigma(v...)");
    }
}

Cftg rtgAsCftg(const RegularTreeGrammar& g) {
    Cftg c;
    c.terminals = g.terminals;
    for (const std::string& v : g.variables) c.variables.push_back({v, 0});
    c.initial = Term::leaf(g.start);
    for (const RtgProduction& p : g.productions) c.productions.push_back({p.lhs, {}, p.rhs});
    return c;
}

std::optional<RegularTreeGrammar> cftgAsRtg(const Cftg& g) {
    if (g.emptyTree || !g.initial.valid() || g.initial.arity() != 0 || !g.isVariable(g.initial.name()))
        return std::nullopt;
    RegularTreeGrammar r;
    r.terminals = g.terminals;
    for (const RankedSymbol& v : g.variables) {
        if (v.rank != 0) return std::nullopt;
        r.variables.push_back(v.name);
    }
    r.start = g.initial.name();
    for (const CftgProduction& p : g.productions) {
        if (p.rhs.isParam() || !g.findTerminal(p.rhs.name())) return std::nullopt;
        for (const Term& c : p.rhs.children())
            if (c.arity() != 0 || !g.isVariable(c.name())) return std::nullopt;
        r.productions.push_back({p.lhs, p.rhs});
    }
    return r;
}

GnfReport isGnf(const Cftg& g) {
    GnfReport report;
    for (std::size_t i = 0; i < g.productions.size(); ++i) {
        const Term& rhs = g.productions[i].rhs;
        if (rhs.isParam() || !g.findTerminal(rhs.name())) report.violations.push_back(i);
    }
    report.gnf = report.violations.empty();
    return report;
}

Cftg ecftgToCftg(const Cftg& g) {
    validateCftg(g);
    const Term& t0 = g.initial;
    if (t0.arity() == 0 && g.isVariable(t0.name())) return g;

    Cftg out = g;
    std::string start = freshName("S", [&](std::string_view n) {
        return g.findTerminal(n) != nullptr || g.findVariable(n) != nullptr;
    });
    out.variables.insert(out.variables.begin(), RankedSymbol{start, 0});
    std::vector<CftgProduction> added;
    if (g.isVariable(t0.name())) {
        for (const CftgProduction& p : g.productions) {
            if (p.lhs != t0.name()) continue;
            Substitution s;
            for (std::size_t i = 0; i < p.params.size(); ++i) s.emplace(p.params[i], t0.child(i));
            added.push_back({start, {}, applySubst(p.rhs, s)});
        }
    } else {
        added.push_back({start, {}, t0});
    }
    out.productions.insert(out.productions.begin(), added.begin(), added.end());
    out.initial = Term::leaf(start);
    return out;
}

bool isDeterministicGnf(const Cftg& g) {
    GnfReport report = isGnf(g);
    if (!report.gnf)
        throw Error(kNotGnf, "grammar is not in Greibach normal form (production " +
                                 std::to_string(report.violations.front()) + ")");
    // Productions form a set: copies that differ only in parameter names
    // count once.
    std::map<std::pair<std::string, std::string>, Term> heads;
    for (const CftgProduction& p : g.productions) {
        Substitution positional;
        for (std::size_t i = 0; i < p.params.size(); ++i)
            positional.emplace(p.params[i], Term::param("#" + std::to_string(i + 1)));
        const Term rhs = applySubst(p.rhs, positional);
        auto [it, added] = heads.emplace(std::pair{p.lhs, p.rhs.name()}, rhs);
        if (!added && it->second != rhs) return false;
    }
    return true;
}

bool isDeterministicGnf(const RegularTreeGrammar& g) { return isDeterministicGnf(rtgAsCftg(g)); }

}  // namespace treetop
