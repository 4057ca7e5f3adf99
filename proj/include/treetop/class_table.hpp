#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "treetop/term.hpp"

namespace treetop {

enum class Variance { Invariant, Covariant, Contravariant };

Variance flip(Variance v);
char varianceChar(Variance v);  // 'o', '+', '-'
Variance varianceFromChar(char c);

struct TypeParam {
    std::string name;
    Variance variance = Variance::Invariant;

    friend bool operator==(const TypeParam&, const TypeParam&) = default;
};

// A nominal class declaration: name, variance-annotated parameters and the
// ordered list of declared supertype patterns over those parameters.
struct ClassDecl {
    std::string name;
    std::vector<TypeParam> params;
    std::vector<Term> supertypes;

    std::size_t rank() const { return params.size(); }
    Variance varianceAt(std::size_t i) const { return params.at(i).variance; }
    // name(x1, ..., xn) with parameter leaves.
    Term selfPattern() const;
    Substitution bind(const Term& instance) const;

    friend bool operator==(const ClassDecl&, const ClassDecl&) = default;
};

class ClassTable {
public:
    ClassTable() = default;
    explicit ClassTable(std::vector<ClassDecl> decls);

    // Throws Error(kDuplicateName) on a repeated class name.
    void add(ClassDecl decl);

    const ClassDecl* find(std::string_view name) const;
    // Throws Error(kUndeclaredClass).
    const ClassDecl& at(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name) != nullptr; }

    const std::vector<ClassDecl>& decls() const { return decls_; }
    std::size_t size() const { return decls_.size(); }
    bool empty() const { return decls_.empty(); }

    friend bool operator==(const ClassTable& a, const ClassTable& b) { return a.decls_ == b.decls_; }

private:
    std::vector<ClassDecl> decls_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Restricts which classes may appear on each side of a query. An empty set
// places no restriction on that side.
struct AlphabetSplit {
    std::set<std::string> sub;
    std::set<std::string> sup;
};

// Throws when `t` mentions an undeclared class, uses a class at the wrong
// arity, or contains a parameter.
void checkGroundType(const ClassTable& table, const Term& t);

// Every t' with t <: t' in one inheritance step, in declaration order.
std::vector<Term> superTypesOf(const ClassTable& table, const Term& t);

struct Diagnostic {
    std::string code;  // WF-CYCLE, WF-VARIANCE, WF-ARITY, WF-UNDECLARED, WF-PARAM, WF-MIXIN
    std::string className;
    std::string message;
};

std::vector<Diagnostic> checkWellFormed(const ClassTable& table);

// Throws Error(kIllFormedTable) listing the diagnostics when there are any.
void requireWellFormed(const ClassTable& table);

// One transitive-inheritance fact `cls(x...) :* target(args...)`, with the
// declaration steps that produced it. `step` pairs are (class name, index of
// the supertype in that class's declaration).
struct InheritanceStep {
    std::string className;
    std::size_t superIndex = 0;
};

struct Inheritance {
    Term target;  // pattern over the declaring class's parameters
    std::vector<InheritanceStep> path;
};

// Transitive supertypes of `cls` (depth first, declaration order, duplicates
// collapsed keeping the first path). With `reflexive` the identity pattern
// comes first. Requires an acyclic, arity-correct table.
std::vector<Inheritance> inheritanceClosure(const ClassTable& table, std::string_view cls,
                                            bool reflexive);

// The same for every class at once.
std::map<std::string, std::vector<Inheritance>> allInheritanceClosures(const ClassTable& table,
                                                                       bool reflexive);

// Class names reachable from `cls` through one or more inheritance steps.
std::set<std::string> superClassNames(const ClassTable& table, std::string_view cls);

struct ClosedSet {
    std::vector<Term> types;  // discovery order
};

struct BudgetExceeded {
    std::vector<Term> chain;  // strictly growing types on one derivation path
};

using ClosureResult = std::variant<ClosedSet, BudgetExceeded>;

inline constexpr std::size_t kDefaultClosureBudget = 10000;

// Smallest set containing `seeds` that is closed under taking children and
// one-step supertypes.
ClosureResult closure(const ClassTable& table, std::span<const Term> seeds,
                      std::size_t budget = kDefaultClosureBudget);

struct FeatureSet {
    bool contravariance = false;
    bool expansive = false;
    bool multipleInstantiation = false;

    bool decidable() const { return !(contravariance && expansive); }
    std::string str() const;

    friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

// Throws Error(kIllFormedTable) when the table is not well formed.
FeatureSet classify(const ClassTable& table);

bool hasContravariance(const ClassTable& table);
bool hasMultipleInstantiation(const ClassTable& table);
// Expansive-recursion test on the parameter dependency graph.
bool isExpansive(const ClassTable& table);

// Independent check of expansiveness: seeds every class instantiated with
// fresh leaves and reports whether the closure outgrows `heightLimit`.
bool closureOutgrows(const ClassTable& table, std::size_t heightLimit, std::size_t budget);

// Text form, one class per line: `name(+x, -y, oz) : super1, super2` with
// `: _` for no supertypes. `#` starts a comment.
ClassTable parseClassTable(std::string_view text);
std::string formatClassTable(const ClassTable& table);

// JSON form: {"classes": [{"name", "params": [{"name","variance"}], "supertypes": [...]}]}
// where a pattern is a string (parameter) or an array [name, child...].
ClassTable classTableFromJson(std::string_view json);
std::string classTableToJson(const ClassTable& table);

// Stable fingerprint of the table contents.
std::size_t fingerprint(const ClassTable& table);

}  // namespace treetop
