#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treetop/class_table.hpp"
#include "treetop/grammars.hpp"
#include "treetop/subtyping.hpp"

namespace treetop {

// A class table read as a language: the supertypes over split.sup of the
// fixed subtype `bottom`.
struct EncodedTable {
    ClassTable table;
    Term bottom;
    AlphabetSplit split;
};

// ---------------------------------------------------------------------------
// Regular forests

// Terminals become classes with covariant parameters, variables become
// parameterless classes inheriting one supertype per production. Throws
// Error(kNameClash) when a name is both a terminal and a variable.
EncodedTable rtgToClassTable(const RegularTreeGrammar& g);

// `type rel x`, where x stands for the tree being derived.
struct QueryAtom {
    Term type;
    Relation rel = Relation::Sub;

    std::string str() const;

    friend bool operator==(const QueryAtom&, const QueryAtom&) = default;
    friend bool operator<(const QueryAtom& a, const QueryAtom& b) {
        if (a.rel != b.rel) return a.rel < b.rel;
        return compareTerms(a.type, b.type) < 0;
    }
};

using QuerySet = std::set<QueryAtom>;

struct QueryGrammar {
    RegularTreeGrammar grammar;
    // The minimal query set each grammar variable stands for.
    std::map<std::string, QuerySet> meaning;
};

// The supertypes of `bottom` over `sigmaTop` as a regular tree grammar whose
// variables are minimal query sets, explored from {bottom <: x}. An empty
// sigmaTop means every class. Throws Error(kFragmentRefused) for expansive
// tables.
QueryGrammar extractRtg(const ClassTable& table, const Term& bottom, const std::set<std::string>& sigmaTop);
RegularTreeGrammar classTableToRtg(const ClassTable& table, const Term& bottom, const std::set<std::string>& sigmaTop);

// ---------------------------------------------------------------------------
// Context-free forests

struct GnfEncodingOptions {
    // Drop repeated productions so no class lists the same supertype twice.
    bool dedup = true;
    // Parameter name for rank-1 classes; x1..xk style (base + index) for
    // higher ranks.
    std::string paramBase = "x";
};

// Terminals become covariant classes, variables invariant classes, and each
// production v(x...) -> sigma(tau...) the supertype sigma(tau...) of v. The
// initial tree is the fixed subtype. Throws Error(kNotGnf).
EncodedTable gnfCftgToClassTable(const Cftg& g, const GnfEncodingOptions& options = {});

// Name of the covariant / invariant grammar variable for class `cls`.
std::string covariantName(std::string_view cls);
std::string invariantName(std::string_view cls);

// Tree-form encodings: parameters x become x_p / x_o, nodes gamma(t...)
// become gamma_p(t_p..., t_o...) in the covariant form and gamma_o(t_o...)
// in the invariant one.
Term encodeCovariant(const Term& t);
Term encodeInvariant(const Term& t);
// Inverse of both encodings.
Term decodeTreeForm(const Term& t);

// The supertypes of `bottom` over `sigmaTop` as a context-free tree grammar
// in GNF with initial tree encodeCovariant(bottom). Throws
// Error(kFragmentRefused) if the table uses contravariance.
Cftg classTableToGnfCftg(const ClassTable& table, const Term& bottom, const std::set<std::string>& sigmaTop);

// ---------------------------------------------------------------------------
// Determinism

struct DeterminismReport {
    bool grammarDeterministic = false;
    bool singleInstantiation = false;

    bool consistent() const { return grammarDeterministic == singleInstantiation; }
};

DeterminismReport checkDeterminismCorrespondence(const RegularTreeGrammar& g);
DeterminismReport checkDeterminismCorrespondence(const Cftg& gnf);
// Extracts a grammar (GNF CFTG when the table has no contravariance,
// otherwise an RTG) and compares.
DeterminismReport checkDeterminismCorrespondence(const ClassTable& table, const Term& bottom,
                                                 const std::set<std::string>& sigmaTop);

// Pairs (i, j), i < j, of supertypes of one class that some substitution of
// the class parameters makes equal.
std::vector<std::pair<std::size_t, std::size_t>> unifiableSupertypes(const ClassDecl& decl);
bool unifiable(const Term& a, const Term& b);

// ---------------------------------------------------------------------------
// Grammar to subtyping machine

struct MachineOptions {
    std::string endMarker = "BOTTOM";
    std::string param = "_x";
};

// reverse -> GNF -> monadic tree grammar -> class table. A token sequence
// w1..wn is accepted when bottom <: wn(...w1(endMarker)).
struct SubtypingMachine {
    StringCfg source;
    StringCfg gnf;  // of the reversed grammar
    Cftg monadic;
    EncodedTable encoded;
    std::string endMarker;
    bool emptyWord = false;
};

SubtypingMachine buildSubtypingMachine(const StringCfg& g, const MachineOptions& options = {});

// The chain type the fluent API accumulates: the last token outermost.
Term chainType(std::span<const std::string> tokens, std::string_view endMarker);

class MachineRecognizer {
public:
    explicit MachineRecognizer(SubtypingMachine machine);

    const SubtypingMachine& machine() const { return machine_; }
    // Holds/Fails for the chain query; the empty sequence answers from the
    // grammar's empty-word flag, unknown tokens fail.
    Verdict decide(std::span<const std::string> tokens, const DecideOptions& options = {}) const;
    bool accepts(std::span<const std::string> tokens) const;

private:
    SubtypingMachine machine_;
    Subtyper subtyper_;
};

}  // namespace treetop
