// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "test_util.hpp"
#include "treetop/cli.hpp"
#include "treetop/codegen.hpp"
#include "treetop/error.hpp"
#include "treetop/subtyping.hpp"
#include "treetop/transforms.hpp"

namespace {

using namespace treetop;
using testing::allWords;
using testing::dataPath;
using testing::isPalindrome;
using testing::loadCfg;
using testing::loadTable;
using testing::loadTreeGrammar;
using testing::ty;
using testing::wordTree;
using Trees = std::set<Term, TermLess>;
using Word = std::vector<std::string>;
using Rng = std::mt19937_64;

// Outcome of one criterion: empty detail means pass.
struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

double secondsSince(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Trees derived(const Cftg& g, std::size_t height) {
    DeriveOptions o;
    o.maxHeight = height;
    return deriveTrees(g, o);
}

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

Outcome palindromeFaithfulness() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    ClassTable t = loadTable("pali.table");
    std::size_t count = 0;
    for (const Word& w : allWords({"a", "b"}, 1, 11)) {
        ++count;
        bool got = holds(decideNonContravariant(t, {ty("v0(E)"), wordTree(w, "E"), Relation::Sub, {}}, {false}));
        if (got != isPalindrome(w)) out.fail("disagreement at length " + std::to_string(w.size()));
    }
    if (holds(decideNonContravariant(t, {ty("v0(E)"), ty("E"), Relation::Sub, {}}, {false})))
        out.fail("empty word accepted");
    if (count != 4094) out.fail("enumerated " + std::to_string(count) + " words");
    double secs = secondsSince(start);
    if (secs >= 5) out.fail("took " + std::to_string(secs) + " s");
    if (out.pass) out.detail = std::to_string(count) + " words in " + std::to_string(secs) + " s";
    return out;
}

Outcome regularRoundTrip() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    RegularTreeGrammar g = *cftgAsRtg(loadTreeGrammar("natlist.tg"));
    EncodedTable e = rtgToClassTable(g);
    Subtyper s(e.table);
    RegularTreeGrammar back = classTableToRtg(e.table, e.bottom, e.split.sup);
    DeriveOptions o;
    o.maxHeight = 4;
    Trees lang = deriveTrees(g, o);
    Trees again = deriveTrees(back, o);

    // Every ground tree over the terminals up to height 3, and every height-4
    // tree whose children are either well-sorted or drawn from a fixed sample
    // of the ill-sorted ones. All height-4 trees number about 3e7, more than
    // the interned term store should hold.
    Trees upTo3;
    for (std::size_t h = 0; h <= 3; ++h) {
        std::vector<Term> prev(upTo3.begin(), upTo3.end());
        for (const char* leaf : {"z", "nil"}) upTo3.insert(ty(leaf));
        for (const Term& a : prev) {
            upTo3.insert(Term::node("s", {a}));
            for (const Term& b : prev) upTo3.insert(Term::node("cons", {a, b}));
        }
    }
    DeriveOptions o3;
    o3.maxHeight = 3;
    Trees sorted = deriveTrees(RegularTreeGrammar{g.terminals, g.variables, "Nat", g.productions}, o3);
    for (const Term& x : deriveTrees(g, o3)) sorted.insert(x);
    std::vector<Term> kids(sorted.begin(), sorted.end());
    Rng rng(0x5eed0100);
    std::vector<Term> pool(upTo3.begin(), upTo3.end());
    for (int i = 0; i < 60; ++i) kids.push_back(pool[pick(rng, pool.size())]);
    Trees universe = upTo3;
    for (const Term& a : kids) {
        universe.insert(Term::node("s", {a}));
        for (const Term& b : kids) universe.insert(Term::node("cons", {a, b}));
    }
    std::size_t members = 0;
    for (const Term& x : universe) {
        if (x.height() > 4) continue;
        bool oracle = lang.count(x) > 0;
        members += oracle;
        if (holds(s.decide({e.bottom, x, Relation::Sub, e.split}, {false})) != oracle) out.fail("decider: " + x.str());
        if ((again.count(x) > 0) != oracle) out.fail("re-extracted: " + x.str());
    }
    double secs = secondsSince(start);
    if (secs >= 10) out.fail("took " + std::to_string(secs) + " s");
    if (out.pass)
        out.detail = std::to_string(members) + " members among " + std::to_string(universe.size()) + " trees";
    return out;
}

Outcome ncExtraction() {
    Outcome out;
    RegularTreeGrammar g = classTableToRtg(loadTable("nc.table"), ty("C"), {});
    DeriveOptions o;
    o.maxHeight = 12;
    Trees expected;
    for (std::size_t k = 0; k <= 6; ++k) expected.insert(wordTree(Word(2 * k, "N"), "C"));
    if (deriveTrees(g, o) != expected) out.fail("language differs");

    // Three productions: S -> C, S -> N(U), U -> N(S).
    if (g.variables.size() != 2 || g.productions.size() != 3) {
        out.fail("expected two variables and three productions");
        return out;
    }
    const std::string& s = g.start;
    const std::string& u = g.variables[0] == s ? g.variables[1] : g.variables[0];
    std::set<std::pair<std::string, std::string>> got, want{{s, "C"}, {s, "N(" + u + ")"}, {u, "N(" + s + ")"}};
    for (const RtgProduction& p : g.productions) got.insert({p.lhs, p.rhs.str()});
    if (got != want) out.fail("productions differ");
    return out;
}

Outcome txmExtraction() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    Cftg g = classTableToGnfCftg(loadTable("pali.table"), ty("v0(E)"), {"a", "b", "E"});
    if (!isGnf(g).gnf) out.fail("not in GNF");
    // A monadic tree of length n holds a word of length n - 1.
    Trees expected;
    for (const Word& w : allWords({"a", "b"}, 0, 9))
        if (isPalindrome(w) && !w.empty()) expected.insert(wordTree(w, "E"));
    Trees got = derived(g, 9);
    if (got != expected)
        out.fail("derived " + std::to_string(got.size()) + " trees, expected " + std::to_string(expected.size()));
    double secs = secondsSince(start);
    if (secs >= 30) out.fail("took " + std::to_string(secs) + " s");
    if (out.pass) out.detail = std::to_string(got.size()) + " palindromes";
    return out;
}

bool inAmbiguous(const Word& w, std::size_t minExp) {
    // a^n b^m c^m d^n or a^n b^n c^m d^m, splitting the word into four runs.
    std::size_t runs[4] = {0, 0, 0, 0};
    std::size_t i = 0;
    const char* letters[4] = {"a", "b", "c", "d"};
    for (std::size_t r = 0; r < 4; ++r)
        while (i < w.size() && w[i] == letters[r]) ++runs[r], ++i;
    if (i != w.size()) return false;
    auto ok = [&](std::size_t n, std::size_t m) { return n >= minExp && m >= minExp; };
    return (runs[0] == runs[3] && runs[1] == runs[2] && ok(runs[0], runs[1])) ||
           (runs[0] == runs[1] && runs[2] == runs[3] && ok(runs[0], runs[2]));
}

Outcome gnfPreservation() {
    Outcome out;
    std::size_t checked = 0;
    for (const char* name : {"Palindrome.cfg", "Canvas.cfg", "DOT.cfg", "Ambiguous.cfg"}) {
        StringCfg g = loadCfg(name);
        StringCfg gnf = cfgToGnf(g);
        if (!isCfgGnf(gnf)) out.fail(std::string(name) + ": not in GNF");
        if (acceptsEmpty(g) != acceptsEmpty(gnf)) out.fail(std::string(name) + ": empty-word flag differs");
        // Both recognizers enumerate the same alphabet in sorted order.
        std::set<std::string> sigma(g.terminals.begin(), g.terminals.end());
        if (sigma != std::set<std::string>(gnf.terminals.begin(), gnf.terminals.end()))
            out.fail(std::string(name) + ": alphabet differs");
        std::vector<bool> verdicts;
        CfgRecognizer(g).forEachWord(8, [&](std::span<const std::string>, bool m) { verdicts.push_back(m); });
        std::size_t k = 0;
        CfgRecognizer(gnf).forEachWord(8, [&](std::span<const std::string> w, bool m) {
            if (k >= verdicts.size() || verdicts[k++] != m)
                {
                std::string text = name;
                for (const std::string& tok : w) text += " " + tok;
                out.fail("membership differs: " + text);
            }
        });
        if (k != verdicts.size()) out.fail(std::string(name) + ": word count differs");
        checked += k;
    }

    // The listed grammar's language, with exponents allowed to be zero.
    // Restricted to words using all four letters it is exactly the n, m >= 1
    // language.
    StringCfg amb = loadCfg("Ambiguous.cfg");
    if (!acceptsEmpty(amb)) out.fail("Ambiguous rejects the empty word");
    CfgRecognizer(amb).forEachWord(8, [&](std::span<const std::string> span, bool member) {
        Word w(span.begin(), span.end());
        if (member != inAmbiguous(w, 0)) out.fail("Ambiguous language differs");
        std::set<std::string> used(w.begin(), w.end());
        if (used.size() == 4 && member != inAmbiguous(w, 1)) out.fail("Ambiguous n, m >= 1 language differs");
    });
    if (out.pass) out.detail = std::to_string(checked) + " words";
    return out;
}

Outcome classifier() {
    Outcome out;
    auto expect = [&](const char* name, FeatureSet want) {
        FeatureSet got = classify(loadTable(name));
        if (!(got == want)) out.fail(std::string(name) + ": " + got.str());
    };
    expect("pali.table", {false, true, true});
    expect("nc.table", {true, false, false});
    FeatureSet exp = classify(loadTable("expansive.table"));
    if (!exp.contravariance || !exp.expansive || exp.decidable()) out.fail("expansive.table: " + exp.str());
    auto diags = checkWellFormed(loadTable("invalid.table"));
    bool variance = false;
    for (const Diagnostic& d : diags) variance |= d.code == "WF-VARIANCE";
    if (!variance) out.fail("invalid.table: no WF-VARIANCE diagnostic");
    return out;
}

Outcome canvasProtocol() {
    Outcome out;
    StringCfg g = loadCfg("Canvas.cfg");
    SubtypingMachine m = buildSubtypingMachine(g);
    Subtyper s(m.encoded.table);
    const Word good{"Draw", "Draw", "Save", "Draw", "Restore", "Draw", "Save", "Draw", "Draw"};
    const Word bad{"Save", "Restore", "Draw", "Restore", "Save"};
    for (const auto& [w, want] : {std::pair{good, true}, {bad, false}}) {
        SubtypeQuery q{m.encoded.bottom, chainType(w, m.endMarker), Relation::Sub, m.encoded.split};
        Verdict v = s.decide(q);
        if (holds(v) != want) out.fail("decider verdict for " + q.judgement().str());
        if (holds(v) && !checkTrace(m.encoded.table, q, *std::get<Holds>(v).trace)) out.fail("trace rejected");
        if (cykMember(g, w) != want) out.fail("cyk verdict");
    }
    return out;
}

Outcome codegenGolden() {
    Outcome out;
    CommandOutput gen = commandGen(dataPath("Canvas.cfg"), true, std::nullopt, false);
    const std::string golden = testing::readText(testing::goldenPath("canvas_api.normalized.txt"));
    if (gen.exitCode != 0) out.fail("gen exited " + std::to_string(gen.exitCode));
    if (golden.empty()) out.fail("missing golden");
    if (normalizeApiSource(gen.text) != golden) out.fail("normalized output differs");
    return out;
}

Outcome performanceTrend() {
    Outcome out;
    std::vector<std::size_t> sizes;
    for (std::size_t n = 300; n <= 2700; n += 300) sizes.push_back(n);
    std::string summary;
    for (const char* name : {"Palindrome", "DOT", "Ambiguous"}) {
        StringCfg g = loadCfg(std::string(name) + ".cfg");
        std::vector<BenchRecord> records;
        runWithLargeStack([&] { records = runBench(g, sizes, 1, name); });
        if (records.size() != sizes.size()) {
            out.fail(std::string(name) + ": incomplete");
            continue;
        }
        double slope = logLogSlope(records);
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s slope %.2f at n=2700 %.0f ms; ", name, slope, records.back().elapsedMs);
        summary += buf;
        if (slope > 3.5) out.fail(std::string(buf));
        if (std::string(name) == "Palindrome" && records.back().elapsedMs >= 2000) out.fail(std::string(buf));
    }
    if (out.pass) out.detail = summary;
    return out;
}

// A random pattern of height at most `height` over a/1, p/2, E/0 and the
// parameters x, y.
Term randomPattern(Rng& rng, std::size_t height) {
    std::size_t k = pick(rng, height == 0 ? 2 : 5);
    switch (k) {
        case 0: return Term::leaf("E");
        case 1: return Term::param(pick(rng, 2) ? "x" : "y");
        case 2: return Term::param("x");
        case 3: return Term::node("a", {randomPattern(rng, height - 1)});
        default: return Term::node("p", {randomPattern(rng, height - 1), randomPattern(rng, height - 1)});
    }
}

Term randomGround(Rng& rng, std::size_t height) {
    std::size_t k = pick(rng, height == 0 ? 1 : 3);
    if (k == 0) return Term::leaf("E");
    if (k == 1) return Term::node("a", {randomGround(rng, height - 1)});
    return Term::node("p", {randomGround(rng, height - 1), randomGround(rng, height - 1)});
}

// Random monadic GNF grammar over a/1, b/1, E/0.
Cftg randomMonadicGnf(Rng& rng) {
    std::string text = "terminals: a/1 b/1 E/0\nstart: v0(E)\n";
    const std::vector<std::string> syms{"a", "b", "v0", "v1", "v2"};
    for (int v = 0; v < 3; ++v) {
        for (std::size_t p = 1 + pick(rng, 3); p > 0; --p) {
            std::string rhs = pick(rng, 2) ? "a(" : "b(";
            std::string close = ")";
            for (std::size_t k = pick(rng, 3); k > 0; --k) {
                rhs += syms[pick(rng, syms.size())] + "(";
                close += ")";
            }
            text += "v" + std::to_string(v) + "(x) -> " + rhs + "x" + close + "\n";
        }
    }
    return parseTreeGrammar(text);
}

Outcome propertySuites() {
    Outcome out;
    Rng rng(0x5eed0101);

    // Encoding commutes with substitution.
    for (int i = 0; i < 1000; ++i) {
        Term tau = randomPattern(rng, 4);
        Term x = randomGround(rng, 3), y = randomGround(rng, 3);
        Term ground = applySubst(tau, {{"x", x}, {"y", y}});
        Substitution both{{"x_p", encodeCovariant(x)}, {"x_o", encodeInvariant(x)},
                          {"y_p", encodeCovariant(y)}, {"y_o", encodeInvariant(y)}};
        if (encodeCovariant(ground) != applySubst(encodeCovariant(tau), both) ||
            encodeInvariant(ground) != applySubst(encodeInvariant(tau), both))
            out.fail("substitution does not commute for " + tau.str());
    }

    // Every proof of every corpus query checks.
    std::size_t traces = 0;
    auto checkAll = [&](const ClassTable& t, const std::vector<SubtypeQuery>& queries) {
        Subtyper s(t);
        for (const SubtypeQuery& q : queries) {
            Verdict v = s.decide(q);
            if (!holds(v)) continue;
            ++traces;
            if (!checkTrace(t, q, *std::get<Holds>(v).trace)) out.fail("trace rejected: " + q.judgement().str());
        }
    };
    {
        std::vector<SubtypeQuery> qs;
        for (const Word& w : allWords({"a", "b"}, 1, 11)) qs.push_back({ty("v0(E)"), wordTree(w, "E"), Relation::Sub, {}});
        checkAll(loadTable("pali.table"), qs);
        qs.clear();
        for (std::size_t k = 0; k <= 8; ++k) {
            qs.push_back({ty("C"), wordTree(Word(k, "N"), "C"), Relation::Sub, {}});
            qs.push_back({wordTree(Word(k, "N"), "C"), ty("N(C)"), Relation::Sub, {}});
        }
        checkAll(loadTable("nc.table"), qs);
        checkAll(parseClassTable("E : _\n" + testing::readText(dataPath("mixed.table"))),
                 {{ty("b(E)"), ty("a(E, E)"), Relation::Sub, {}}, {ty("a(E, E)"), ty("b(E)"), Relation::Sup, {}}});
    }
    for (auto [name, len] : {std::pair{"Palindrome.cfg", 8}, {"Canvas.cfg", 6}, {"DOT.cfg", 4}, {"Ambiguous.cfg", 7}}) {
        SubtypingMachine m = buildSubtypingMachine(loadCfg(name));
        std::vector<SubtypeQuery> qs;
        for (const Word& w : allWords(m.source.terminals, 1, static_cast<std::size_t>(len)))
            qs.push_back({m.encoded.bottom, chainType(w, m.endMarker), Relation::Sub, m.encoded.split});
        checkAll(m.encoded.table, qs);
    }
    for (auto [name, sigma] : {std::pair{"pali.tg", Word{"a", "b"}}, {"anmbn.tg", Word{"a", "b", "m"}}}) {
        EncodedTable e = gnfCftgToClassTable(loadTreeGrammar(name));
        std::vector<SubtypeQuery> qs;
        for (const Word& w : allWords(sigma, 1, 7)) qs.push_back({e.bottom, wordTree(w, "E"), Relation::Sub, e.split});
        checkAll(e.table, qs);
    }

    // Supertype queries mirror subtype queries.
    {
        ClassTable t = parseClassTable("E : _\nF : E\nN(-x) : _\nC : N(N(C))\nbox(+x) : _\nneg(-x) : box(neg(x))\n");
        std::vector<Term> pool;
        for (const char* s : {"E", "F", "C", "N(C)", "N(N(C))", "N(E)", "N(F)", "box(E)", "box(F)", "neg(E)",
                              "neg(F)", "box(neg(E))", "box(neg(F))", "N(box(E))", "N(neg(E))", "box(C)"})
            pool.push_back(ty(s));
        Subtyper s(t);
        for (int i = 0; i < 1000; ++i) {
            Term l = pool[pick(rng, pool.size())], r = pool[pick(rng, pool.size())];
            if (holds(s.decide({l, r, Relation::Sub, {}}, {false})) != holds(s.decide({r, l, Relation::Sup, {}}, {false})))
                out.fail("mirror differs for " + l.str() + " / " + r.str());
        }
    }

    // No generated table has a unifiable pair of supertypes.
    std::vector<EncodedTable> generated;
    for (const char* name : {"pali.tg", "anmbn.tg"}) generated.push_back(gnfCftgToClassTable(loadTreeGrammar(name)));
    generated.push_back(rtgToClassTable(*cftgAsRtg(loadTreeGrammar("natlist.tg"))));
    for (const char* name : {"Palindrome.cfg", "Canvas.cfg", "DOT.cfg", "Ambiguous.cfg"})
        generated.push_back(buildSubtypingMachine(loadCfg(name)).encoded);
    for (int i = 0; i < 300; ++i) generated.push_back(gnfCftgToClassTable(randomMonadicGnf(rng)));
    for (const EncodedTable& e : generated)
        for (const ClassDecl& d : e.table.decls())
            if (!unifiableSupertypes(d).empty()) out.fail("unifiable supertypes in " + d.name);

    if (out.pass)
        out.detail = std::to_string(traces) + " traces, " + std::to_string(generated.size()) + " generated tables";
    return out;
}

}  // namespace

// With arguments, runs only the listed criterion numbers.
int main(int argc, char** argv) {
    std::set<std::size_t> only;
    for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"palindrome faithfulness", palindromeFaithfulness},
        {"regular round trip", regularRoundTrip},
        {"N/C extraction", ncExtraction},
        {"monadic extraction", txmExtraction},
        {"GNF preservation", gnfPreservation},
        {"classifier", classifier},
        {"canvas protocol", canvasProtocol},
        {"codegen golden", codegenGolden},
        {"performance trend", performanceTrend},
        {"property suites", propertySuites},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (!only.empty() && !only.count(i + 1)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failures += !o.pass;
        std::printf("%s %zu %s%s%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.empty() ? "" : ": ", o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
