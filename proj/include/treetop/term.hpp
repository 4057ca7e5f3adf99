#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace treetop {

namespace detail {
struct TermNode;
}

// An immutable ranked tree: either a named node with ordered children or a
// named parameter leaf. Terms are interned, so two terms are structurally
// equal exactly when they share a node and == is a pointer comparison.
//
// The same representation serves ground types, type patterns and grammar
// tree forms; which names are classes, terminals or grammar variables is
// decided by the surrounding table or grammar.
class Term {
public:
    Term() = default;

    static Term node(std::string_view name, std::vector<Term> children = {});
    static Term leaf(std::string_view name) { return node(name); }
    static Term param(std::string_view name);

    bool valid() const noexcept { return node_ != nullptr; }
    bool isParam() const;
    const std::string& name() const;
    std::span<const Term> children() const;
    const Term& child(std::size_t i) const;
    std::size_t arity() const;

    // Leaves have height 0.
    std::size_t height() const;
    std::size_t size() const;
    bool isGround() const;
    std::size_t hash() const;

    std::string str() const;

    friend bool operator==(const Term& a, const Term& b) noexcept { return a.node_ == b.node_; }

    const detail::TermNode* id() const noexcept { return node_; }

private:
    explicit Term(const detail::TermNode* n) : node_(n) {}
    const detail::TermNode* node_ = nullptr;
};

// Deterministic structural order: parameters before nodes, then by name, then
// children lexicographically. Independent of interning addresses.
int compareTerms(const Term& a, const Term& b);

struct TermLess {
    bool operator()(const Term& a, const Term& b) const { return compareTerms(a, b) < 0; }
};

struct TermHash {
    std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

using Substitution = std::map<std::string, Term>;

// One-sided matching. Repeated parameters must bind to equal subterms.
std::optional<Substitution> matchPattern(const Term& pattern, const Term& subject);

// Throws Error(kUnboundParameter) when a parameter of `pattern` has no binding.
Term applySubst(const Term& pattern, const Substitution& subst);

// Parameter names occurring in `t`, in first-occurrence order.
std::vector<std::string> paramsOf(const Term& t);

bool containsParam(const Term& t, std::string_view name);

// Number of interned nodes, for diagnostics.
std::size_t internedTermCount();

// Parses `name`, `name(child, ...)`. Identifiers for which `isParam` returns
// true become parameter leaves.
Term parseTerm(std::string_view text,
               const std::function<bool(std::string_view)>& isParam = {});

// Builds the monadic chain s1(s2(...sn(end))).
Term monadicChain(std::span<const std::string> symbols, const Term& end);

}  // namespace treetop

template <>
struct std::hash<treetop::Term> {
    std::size_t operator()(const treetop::Term& t) const noexcept { return t.hash(); }
};
