#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treetop/term.hpp"

namespace treetop {

struct RankedSymbol {
    std::string name;
    std::size_t rank = 0;

    friend bool operator==(const RankedSymbol&, const RankedSymbol&) = default;
};

// `base` if free, otherwise base2, base3, ... whichever is free first.
std::string freshName(std::string_view base, const std::function<bool(std::string_view)>& taken);

// ---------------------------------------------------------------------------
// Tree grammars

// v -> sigma(v1, ..., vn): terminal root, variable leaves.
struct RtgProduction {
    std::string lhs;
    Term rhs;

    friend bool operator==(const RtgProduction&, const RtgProduction&) = default;
};

struct RegularTreeGrammar {
    std::vector<RankedSymbol> terminals;
    std::vector<std::string> variables;
    std::string start;
    std::vector<RtgProduction> productions;
};

// v(x1, ..., xk) -> tau, where tau is built from terminals, variables and
// the parameters x1..xk.
struct CftgProduction {
    std::string lhs;
    std::vector<std::string> params;
    Term rhs;

    friend bool operator==(const CftgProduction&, const CftgProduction&) = default;
};

struct Cftg {
    std::vector<RankedSymbol> terminals;
    std::vector<RankedSymbol> variables;
    Term initial;
    std::vector<CftgProduction> productions;
    // A tree accepted in addition to the derived ones; used to carry the
    // empty word through the word-to-tree encoding.
    std::optional<Term> emptyTree;

    const RankedSymbol* findVariable(std::string_view name) const;
    const RankedSymbol* findTerminal(std::string_view name) const;
    bool isVariable(std::string_view name) const { return findVariable(name) != nullptr; }
};

// Throws Error(kNameClash / kArityMismatch / kUnboundParameter) on an
// inconsistent grammar.
void validateCftg(const Cftg& g);
void validateRtg(const RegularTreeGrammar& g);

Cftg rtgAsCftg(const RegularTreeGrammar& g);
// The grammar as an RTG if every variable has rank 0, every production is in
// the v -> sigma(v...) form and the initial tree is a variable leaf.
std::optional<RegularTreeGrammar> cftgAsRtg(const Cftg& g);

struct DeriveOptions {
    std::size_t maxHeight = 4;
    std::size_t maxSteps = 100000;
    std::size_t frontierCap = 1000000;
    // Rewrite every variable occurrence instead of only the leftmost
    // outermost one. Both yield the same terminal trees.
    bool allRedexes = false;
};

// All terminal trees of height <= maxHeight derivable from the initial tree,
// by exhaustive breadth-first rewriting. Throws Error(kOverflow) when the
// frontier exceeds frontierCap.
std::set<Term, TermLess> deriveTrees(const Cftg& g, const DeriveOptions& options = {});
std::set<Term, TermLess> deriveTrees(const RegularTreeGrammar& g, const DeriveOptions& options = {});

struct GnfReport {
    bool gnf = true;
    std::vector<std::size_t> violations;  // production indices
};

// Every right-hand side has a terminal root.
GnfReport isGnf(const Cftg& g);

// Replaces a tree-valued start by a fresh rank-0 start variable.
Cftg ecftgToCftg(const Cftg& g);

// No variable has two productions whose right-hand sides share a terminal
// root. Throws Error(kNotGnf) if the grammar is not in GNF.
bool isDeterministicGnf(const Cftg& g);
bool isDeterministicGnf(const RegularTreeGrammar& g);

// ---------------------------------------------------------------------------
// String grammars

struct CfgProduction {
    std::string lhs;
    std::vector<std::string> rhs;  // empty = epsilon

    friend bool operator==(const CfgProduction&, const CfgProduction&) = default;
};

struct StringCfg {
    std::string start;
    std::vector<std::string> variables;  // declaration order
    std::vector<std::string> terminals;  // sorted
    std::vector<CfgProduction> productions;
    // The empty word is in the language even if no production derives it.
    bool emptyWord = false;

    bool isVariable(std::string_view s) const;
    bool isTerminal(std::string_view s) const;
};

// Variables are the left-hand sides in first-appearance order (the first is
// the start unless given); every other right-hand-side symbol is a terminal.
StringCfg makeCfg(std::vector<CfgProduction> productions, std::string start = {});

std::set<std::string> nullableVariables(const StringCfg& g);
bool acceptsEmpty(const StringCfg& g);

// Terminal-headed form. Removes epsilon (recording it in emptyWord), then
// left recursion in declaration order, then substitutes variable heads.
// Non-head positions may hold terminals.
StringCfg cfgToGnf(const StringCfg& g);

// Every production has a non-empty right-hand side starting with a terminal.
bool isCfgGnf(const StringCfg& g);

StringCfg reverseCfg(const StringCfg& g);

// v -> a b1 ... bk becomes v(x) -> a(b1(...bk(x))); the initial tree is
// start(endMarker). Throws Error(kNotGnf) unless isCfgGnf(g).
Cftg cfgToMonadicCftg(const StringCfg& g, const std::string& endMarker, const std::string& param = "x");

// CYK membership over a private Chomsky-normal-form copy of the grammar.
class CfgRecognizer {
public:
    explicit CfgRecognizer(const StringCfg& g);
    bool accepts(std::span<const std::string> word) const;
    // Calls fn(word, member) for every word over the terminal alphabet, in
    // sorted order, with length in [1, maxLength]. Words are extended depth
    // first so words with a common prefix share chart columns.
    void forEachWord(std::size_t maxLength,
                     const std::function<void(std::span<const std::string>, bool)>& fn) const;

private:
    struct Binary {
        std::size_t lhs, left, right;
    };
    bool acceptsEmpty_ = false;
    std::size_t start_ = 0;
    std::size_t varCount_ = 0;
    std::vector<std::string> terminals_;
    std::vector<std::vector<std::size_t>> byTerminal_;  // terminal index -> lhs list
    std::vector<Binary> binaries_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> byLeft_;  // left -> (right, lhs)
};

bool cykMember(const StringCfg& g, std::span<const std::string> word);

// Every word of length <= maxLength in the language, by bounded fixpoint.
std::set<std::vector<std::string>> wordsUpTo(const StringCfg& g, std::size_t maxLength);

// ---------------------------------------------------------------------------
// Text and JSON forms

// Lines `LHS ::= tok tok ...`; empty right-hand side is epsilon; `#` starts a
// comment. Throws Error(kParse) on malformed or empty input.
StringCfg parseCfg(std::string_view text);
std::string formatCfg(const StringCfg& g);
StringCfg cfgFromJson(std::string_view json);
std::string cfgToJson(const StringCfg& g);

// Tree grammar text: optional `terminals: a/1 E/0` and `variables: v/1` lines, a `start: tree`
// line and productions `v(x, y) -> tree`. Variables are the left-hand sides.
Cftg parseTreeGrammar(std::string_view text);
std::string formatTreeGrammar(const Cftg& g);

}  // namespace treetop
