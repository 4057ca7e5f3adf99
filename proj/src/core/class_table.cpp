#include "treetop/class_table.hpp"

#include "treetop/error.hpp"

namespace treetop {

Variance flip(Variance v) {
    switch (v) {
        case Variance::Covariant: return Variance::Contravariant;
        case Variance::Contravariant: return Variance::Covariant;
        case Variance::Invariant: return Variance::Invariant;
    }
    return v;
}

char varianceChar(Variance v) {
    switch (v) {
        case Variance::Covariant: return '+';
        case Variance::Contravariant: return '-';
        case Variance::Invariant: return 'o';
    }
    return 'o';
}

Variance varianceFromChar(char c) {
    switch (c) {
        case '+': return Variance::Covariant;
        case '-': return Variance::Contravariant;
        case 'o':
        case '=': return Variance::Invariant;
        default: throw Error(kParse, std::string("unknown variance '") + c + "'");
    }
}

Term ClassDecl::selfPattern() const {
    std::vector<Term> kids;
    kids.reserve(params.size());
    for (const TypeParam& p : params) kids.push_back(Term::param(p.name));
    return Term::node(name, std::move(kids));
}

Substitution ClassDecl::bind(const Term& instance) const {
    if (instance.arity() != params.size())
        throw Error(kArityMismatch, "class '" + name + "' expects " + std::to_string(params.size()) +
                                        " arguments, got " + std::to_string(instance.arity()));
    Substitution s;
    for (std::size_t i = 0; i < params.size(); ++i) s.emplace(params[i].name, instance.child(i));
    return s;
}

ClassTable::ClassTable(std::vector<ClassDecl> decls) {
    for (ClassDecl& d : decls) add(std::move(d));
}

void ClassTable::add(ClassDecl decl) {
    if (index_.count(decl.name)) throw Error(kDuplicateName, "class '" + decl.name + "' declared twice");
    index_.emplace(decl.name, decls_.size());
    decls_.push_back(std::move(decl));
}

const ClassDecl* ClassTable::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &decls_[it->second];
}

const ClassDecl& ClassTable::at(std::string_view name) const {
    if (const ClassDecl* d = find(name)) return *d;
    throw Error(kUndeclaredClass, "class '" + std::string(name) + "' is not declared");
}

void checkGroundType(const ClassTable& table, const Term& t) {
    if (t.isParam()) throw Error(kInvalidArgument, "type '" + t.str() + "' is not ground");
    const ClassDecl& d = table.at(t.name());
    if (d.rank() != t.arity())
        throw Error(kArityMismatch, "class '" + d.name + "' has rank " + std::to_string(d.rank()) +
                                        " but is applied to " + std::to_string(t.arity()) + " arguments");
    for (const Term& c : t.children()) checkGroundType(table, c);
}

std::vector<Term> superTypesOf(const ClassTable& table, const Term& t) {
    if (t.isParam()) throw Error(kInvalidArgument, "type '" + t.str() + "' is not ground");
    const ClassDecl& d = table.at(t.name());
    Substitution s = d.bind(t);
    std::vector<Term> out;
    out.reserve(d.supertypes.size());
    for (const Term& sup : d.supertypes) out.push_back(applySubst(sup, s));
    return out;
}

std::size_t fingerprint(const ClassTable& table) {
    return std::hash<std::string>{}(formatClassTable(table));
}

std::string FeatureSet::str() const {
    std::string s;
    s += contravariance ? "C" : "!C";
    s += expansive ? " X" : " !X";
    s += multipleInstantiation ? " M" : " !M";
    s += decidable() ? " decidable" : " undecidable";
    return s;
}

}  // namespace treetop
