#include <algorithm>

#include "treetop/error.hpp"
#include "treetop/transforms.hpp"

namespace treetop {

namespace {

constexpr std::string_view kCovariantSuffix = "_p";
constexpr std::string_view kInvariantSuffix = "_o";

bool endsWith(std::string_view s, std::string_view suffix) {
    return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string stripSuffix(const std::string& s) { return s.substr(0, s.size() - 2); }

}  // namespace

std::string covariantName(std::string_view cls) { return std::string(cls) + std::string(kCovariantSuffix); }
std::string invariantName(std::string_view cls) { return std::string(cls) + std::string(kInvariantSuffix); }

Term encodeInvariant(const Term& t) {
    if (t.isParam()) return Term::param(invariantName(t.name()));
    std::vector<Term> kids;
    for (const Term& c : t.children()) kids.push_back(encodeInvariant(c));
    return Term::node(invariantName(t.name()), std::move(kids));
}

Term encodeCovariant(const Term& t) {
    if (t.isParam()) return Term::param(covariantName(t.name()));
    std::vector<Term> kids;
    for (const Term& c : t.children()) kids.push_back(encodeCovariant(c));
    for (const Term& c : t.children()) kids.push_back(encodeInvariant(c));
    return Term::node(covariantName(t.name()), std::move(kids));
}

Term decodeTreeForm(const Term& t) {
    const std::string& n = t.name();
    const bool covariant = endsWith(n, kCovariantSuffix);
    if (!covariant && !endsWith(n, kInvariantSuffix))
        throw Error(kInvalidArgument, "'" + n + "' is not an annotated tree-form symbol");
    if (t.isParam()) return Term::param(stripSuffix(n));
    std::size_t keep = t.arity();
    if (covariant) {
        if (keep % 2 != 0) throw Error(kArityMismatch, "covariant form '" + n + "' needs an even arity");
        keep /= 2;
    }
    std::vector<Term> kids;
    for (std::size_t i = 0; i < keep; ++i) kids.push_back(decodeTreeForm(t.child(i)));
    return Term::node(stripSuffix(n), std::move(kids));
}

Cftg classTableToGnfCftg(const ClassTable& table, const Term& bottom, const std::set<std::string>& sigmaTop) {
    requireWellFormed(table);
    if (hasContravariance(table))
        throw Error(kFragmentRefused, "context-free extraction needs a table without contravariance");
    checkGroundType(table, bottom);
    for (const std::string& s : sigmaTop) table.at(s);
    auto inTop = [&](const std::string& cls) { return sigmaTop.empty() || sigmaTop.count(cls) > 0; };

    Cftg g;
    for (const ClassDecl& d : table.decls())
        if (inTop(d.name)) g.terminals.push_back({d.name, d.rank()});
    for (const ClassDecl& d : table.decls()) {
        for (const std::string& v : {covariantName(d.name), invariantName(d.name)})
            if (g.findTerminal(v)) throw Error(kNameClash, "annotated variable '" + v + "' collides with a class");
        g.variables.push_back({covariantName(d.name), 2 * d.rank()});
        g.variables.push_back({invariantName(d.name), d.rank()});
    }

    for (const ClassDecl& d : table.decls()) {
        std::vector<std::string> params;
        for (const TypeParam& p : d.params) params.push_back(covariantName(p.name));
        for (const TypeParam& p : d.params) params.push_back(invariantName(p.name));

        for (const Inheritance& inh : inheritanceClosure(table, d.name, true)) {
            if (!inTop(inh.target.name())) continue;
            const ClassDecl& target = table.at(inh.target.name());
            std::vector<Term> kids;
            for (std::size_t i = 0; i < target.rank(); ++i)
                kids.push_back(target.varianceAt(i) == Variance::Covariant ? encodeCovariant(inh.target.child(i))
                                                                           : encodeInvariant(inh.target.child(i)));
            g.productions.push_back({covariantName(d.name), params, Term::node(target.name, std::move(kids))});
        }
        if (inTop(d.name)) {
            std::vector<std::string> inv(params.begin() + static_cast<std::ptrdiff_t>(d.rank()), params.end());
            std::vector<Term> kids;
            for (const std::string& p : inv) kids.push_back(Term::param(p));
            g.productions.push_back({invariantName(d.name), inv, Term::node(d.name, std::move(kids))});
        }
    }
    g.initial = encodeCovariant(bottom);
    return g;
}

}  // namespace treetop
