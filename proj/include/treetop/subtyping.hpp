#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "treetop/class_table.hpp"

namespace treetop {

enum class Relation { Sub, Eq, Sup };

// "<:", "=", ":>"
const char* relationSymbol(Relation r);
Relation relationFromSymbol(std::string_view s);
// Covariant -> Sub, invariant -> Eq, contravariant -> Sup.
Relation relationFor(Variance v);
Relation mirror(Relation r);

struct Judgement {
    Term left;
    Term right;
    Relation rel = Relation::Sub;

    std::string str() const;
    friend bool operator==(const Judgement&, const Judgement&) = default;
};

struct SubtypeQuery {
    Term left;
    Term right;
    Relation rel = Relation::Sub;
    AlphabetSplit split;

    Judgement judgement() const { return {left, right, rel}; }
};

// Parses "left <: right", "left = right" or "left :> right".
SubtypeQuery parseQuery(std::string_view text);

// A derivation tree. Each node proves its own judgement:
//   Refl   left = right under Eq, identical types, no premises
//   Var    equal roots under Sub, one premise per argument with the relation
//          given by the declared variance
//   Super  one inheritance step on the left under Sub; one premise
//   Mirror a :> judgement proved by the swapped <: judgement
struct ProofTrace {
    enum class Rule { Refl, Var, Super, Mirror };

    Rule rule = Rule::Var;
    Judgement goal;
    std::string className;  // Super: class whose declaration was used
    std::size_t superIndex = 0;  // Super: index into its supertype list
    std::vector<ProofTrace> premises;

    std::size_t size() const;
};

const char* ruleName(ProofTrace::Rule r);

// Replays the trace against the table; true iff every step is a valid rule
// instance and the root proves the query.
bool checkTrace(const ClassTable& table, const SubtypeQuery& query, const ProofTrace& trace);

std::string traceToJson(const ProofTrace& trace);
ProofTrace traceFromJson(std::string_view json);

// The canonical derivation of t <: t (or t = t, t :> t).
ProofTrace reflexiveTrace(const ClassTable& table, const Term& t, Relation rel);

struct Holds {
    std::shared_ptr<const ProofTrace> trace;  // null when traces were not requested
};
struct Fails {};
struct CycleRejected {
    std::vector<Judgement> cycle;  // from the repeated judgement back to itself
};
struct Undecided {
    std::string reason;
};

using Verdict = std::variant<Holds, Fails, CycleRejected, Undecided>;

const char* verdictName(const Verdict& v);
inline bool holds(const Verdict& v) { return std::holds_alternative<Holds>(v); }

struct DecideStats {
    std::size_t expansions = 0;
    std::size_t memoHits = 0;
};

class DecisionCache;

struct DecideOptions {
    bool withTrace = true;
    // For contravariant expansive tables: search up to `depthLimit` and
    // report Undecided if no proof is found and the limit was hit.
    bool boundedSearch = false;
    std::size_t depthLimit = 256;
    DecisionCache* cache = nullptr;
    DecideStats* stats = nullptr;
};

// Shared, thread-safe memo of final verdicts keyed by table fingerprint.
class DecisionCache {
public:
    std::optional<Verdict> lookup(std::size_t table, const Judgement& j) const;
    void store(std::size_t table, const Judgement& j, const Verdict& v);
    std::size_t size() const;

private:
    using Key = std::tuple<std::size_t, const void*, const void*, int>;
    mutable std::mutex mutex_;
    std::map<Key, Verdict> entries_;
};

// Tables without contravariant parameters. Eq is syntactic equality.
// Throws Error(kFragmentRefused) on a table with contravariance.
Verdict decideNonContravariant(const ClassTable& table, const SubtypeQuery& query,
                               const DecideOptions& options = {});

// Tables without expansive recursion: proof search with a per-path ledger;
// a repeated judgement on the current path closes that branch.
// Throws Error(kFragmentRefused) on an expansive table.
Verdict decideNonExpansive(const ClassTable& table, const SubtypeQuery& query,
                           const DecideOptions& options = {});

namespace detail {
class TableFacts;
}

// A table prepared for repeated queries: validated and classified once, with
// transitive inheritance precomputed per class.
class Subtyper {
public:
    // Throws Error(kIllFormedTable) when the table is not well formed.
    explicit Subtyper(ClassTable table);
    ~Subtyper();
    Subtyper(const Subtyper&) = delete;
    Subtyper& operator=(const Subtyper&) = delete;

    const ClassTable& table() const { return *table_; }
    const FeatureSet& features() const { return features_; }

    // Validates the query, then dispatches on the table's features:
    // no contravariance -> decideNonContravariant, otherwise no expansive
    // recursion -> decideNonExpansive, otherwise Undecided (or a bounded
    // search when requested).
    Verdict decide(const SubtypeQuery& query, const DecideOptions& options = {}) const;

private:
    std::unique_ptr<const ClassTable> table_;
    FeatureSet features_;
    std::unique_ptr<detail::TableFacts> facts_;
    std::size_t fingerprint_ = 0;
};

Verdict decide(const ClassTable& table, const SubtypeQuery& query, const DecideOptions& options = {});

// Checks that both sides are declared ground types over the split.
void validateQuery(const ClassTable& table, const SubtypeQuery& query);

}  // namespace treetop
