// Randomized invariants. Every generator is seeded with a fixed constant so
// failures reproduce.

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "treetop/transforms.hpp"

namespace treetop {
namespace {

using testing::loadTable;
using testing::ty;
using Trees = std::set<Term, TermLess>;
using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

// A random ground type of the table with height at most `height`.
Term randomType(Rng& rng, const ClassTable& table, std::size_t height) {
    std::vector<const ClassDecl*> choices;
    for (const ClassDecl& d : table.decls())
        if (height > 0 || d.rank() == 0) choices.push_back(&d);
    const ClassDecl& d = *choices[pick(rng, choices.size())];
    std::vector<Term> kids;
    for (std::size_t i = 0; i < d.rank(); ++i) kids.push_back(randomType(rng, table, height - 1));
    return Term::node(d.name, kids);
}

Trees derived(const Cftg& g, std::size_t height) {
    DeriveOptions o;
    o.maxHeight = height;
    return deriveTrees(g, o);
}

const char* kCovariantMix = "E : _\nF : E\nbox(+x) : _\ncell(ox) : _\npair(+x, oy) : _\nsub(oz) : pair(z, z)\n";
const char* kContravariantMix = "E : _\nF : E\nN(-x) : _\nC : N(N(C))\nbox(+x) : _\nneg(-x) : box(neg(x))\n";

TEST(Properties, EncodingsDecodeBack) {
    Rng rng(0x5eed0001);
    ClassTable t = parseClassTable(kCovariantMix);
    for (int i = 0; i < 1000; ++i) {
        Term x = randomType(rng, t, 4);
        ASSERT_EQ(decodeTreeForm(encodeCovariant(x)), x) << x.str();
        ASSERT_EQ(decodeTreeForm(encodeInvariant(x)), x) << x.str();
        ASSERT_EQ(encodeCovariant(x).arity(), 2 * x.arity());
        ASSERT_EQ(encodeInvariant(x).arity(), x.arity());
    }
}

TEST(Properties, InvariantFormsDeriveOnlyThemselves) {
    Rng rng(0x5eed0002);
    ClassTable t = parseClassTable("E : _\nF : _\nbox(+x) : _\npair(+x, +y) : _\n");
    Cftg g = classTableToGnfCftg(t, ty("E"), {});
    for (int i = 0; i < 200; ++i) {
        Term x = randomType(rng, t, 3);
        g.initial = encodeInvariant(x);
        ASSERT_EQ(derived(g, 4), (Trees{x})) << x.str();
    }
}

TEST(Properties, EveryProofTraceChecks) {
    Rng rng(0x5eed0003);
    for (const char* text : {kCovariantMix, kContravariantMix}) {
        ClassTable t = parseClassTable(text);
        Subtyper s(t);
        std::size_t proved = 0;
        for (int i = 0; i < 1000; ++i) {
            SubtypeQuery q{randomType(rng, t, 3), randomType(rng, t, 3), Relation(pick(rng, 3)), {}};
            Verdict v = s.decide(q);
            if (!holds(v)) continue;
            ++proved;
            ASSERT_TRUE(checkTrace(t, q, *std::get<Holds>(v).trace)) << q.judgement().str();
        }
        EXPECT_GT(proved, 10u) << text;
    }
}

TEST(Properties, PalindromeTracesCheck) {
    ClassTable t = loadTable("pali.table");
    Subtyper s(t);
    for (const auto& w : testing::allWords({"a", "b"}, 1, 9)) {
        if (!testing::isPalindrome(w)) continue;
        SubtypeQuery q{ty("v0(E)"), testing::wordTree(w, "E"), Relation::Sub, {}};
        Verdict v = s.decide(q);
        ASSERT_TRUE(holds(v));
        ASSERT_TRUE(checkTrace(t, q, *std::get<Holds>(v).trace));
    }
}

TEST(Properties, SupertypeQueriesMirrorSubtypeQueries) {
    Rng rng(0x5eed0004);
    for (const char* text : {kCovariantMix, kContravariantMix}) {
        ClassTable t = parseClassTable(text);
        Subtyper s(t);
        for (int i = 0; i < 1000; ++i) {
            Term l = randomType(rng, t, 3), r = randomType(rng, t, 3);
            bool sub = holds(s.decide({l, r, Relation::Sub, {}}, {false}));
            bool sup = holds(s.decide({r, l, Relation::Sup, {}}, {false}));
            ASSERT_EQ(sub, sup) << l.str() << " / " << r.str();
            if (l == r) {
                ASSERT_TRUE(sub);
            }
        }
    }
}

// Random GNF monadic grammar over a/1, b/1, E/0 with variables v0..v2.
Cftg randomMonadicGnf(Rng& rng) {
    std::string text = "terminals: a/1 b/1 E/0\nstart: v0(E)\n";
    const std::vector<std::string> syms{"a", "b", "v0", "v1", "v2"};
    for (int v = 0; v < 3; ++v) {
        const std::size_t count = 1 + pick(rng, 3);
        for (std::size_t p = 0; p < count; ++p) {
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

TEST(Properties, GnfEncodingAgreesWithDerivation) {
    Rng rng(0x5eed0005);
    for (int i = 0; i < 300; ++i) {
        Cftg g = randomMonadicGnf(rng);
        EncodedTable e = gnfCftgToClassTable(g);
        Subtyper s(e.table);
        Trees lang = derived(g, 5);
        for (const auto& w : testing::allWords({"a", "b"}, 0, 5)) {
            Term x = testing::wordTree(w, "E");
            ASSERT_EQ(holds(s.decide({e.bottom, x, Relation::Sub, e.split}, {false})), lang.count(x) > 0)
                << formatTreeGrammar(g) << x.str();
        }
    }
}

TEST(Properties, GnfRoundTripPreservesTheLanguage) {
    Rng rng(0x5eed0006);
    for (int i = 0; i < 300; ++i) {
        Cftg g = randomMonadicGnf(rng);
        EncodedTable e = gnfCftgToClassTable(g);
        ASSERT_EQ(derived(classTableToGnfCftg(e.table, e.bottom, e.split.sup), 5), derived(g, 5))
            << formatTreeGrammar(g);
    }
}

TEST(Properties, DedupLeavesNoRepeatedSupertypes) {
    Rng rng(0x5eed0007);
    for (int i = 0; i < 100; ++i) {
        EncodedTable e = gnfCftgToClassTable(randomMonadicGnf(rng));
        for (const ClassDecl& d : e.table.decls()) {
            Trees unique(d.supertypes.begin(), d.supertypes.end());
            ASSERT_EQ(unique.size(), d.supertypes.size()) << d.name;
        }
    }
}

// Random RTG over f/2, g/1, c/0, d/0 with variables V0..V2.
RegularTreeGrammar randomRtg(Rng& rng) {
    const std::vector<RankedSymbol> terms{{"f", 2}, {"g", 1}, {"c", 0}, {"d", 0}};
    RegularTreeGrammar g{terms, {"V0", "V1", "V2"}, "V0", {}};
    for (const std::string& v : g.variables) {
        for (std::size_t p = 1 + pick(rng, 3); p > 0; --p) {
            const RankedSymbol& s = terms[pick(rng, terms.size())];
            std::vector<Term> kids;
            for (std::size_t k = 0; k < s.rank; ++k) kids.push_back(Term::leaf(g.variables[pick(rng, 3)]));
            g.productions.push_back({v, Term::node(s.name, kids)});
        }
    }
    return g;
}

TEST(Properties, RtgEncodingAgreesWithDerivation) {
    Rng rng(0x5eed0008);
    ClassTable alphabet = parseClassTable("f(+x, +y) : _\ng(+x) : _\nc : _\nd : _\n");
    Trees universe;
    for (int i = 0; i < 4000; ++i) universe.insert(randomType(rng, alphabet, 2));
    for (int i = 0; i < 300; ++i) {
        RegularTreeGrammar g = randomRtg(rng);
        EncodedTable e = rtgToClassTable(g);
        Subtyper s(e.table);
        DeriveOptions o;
        o.maxHeight = 2;
        Trees lang = deriveTrees(g, o);
        for (const Term& x : universe)
            ASSERT_EQ(holds(s.decide({e.bottom, x, Relation::Sub, e.split}, {false})), lang.count(x) > 0)
                << x.str();
    }
}

TEST(Properties, RtgRoundTripPreservesTheLanguage) {
    Rng rng(0x5eed0009);
    for (int i = 0; i < 300; ++i) {
        RegularTreeGrammar g = randomRtg(rng);
        EncodedTable e = rtgToClassTable(g);
        DeriveOptions o;
        o.maxHeight = 3;
        Trees lang = deriveTrees(g, o);
        if (lang.empty()) continue;
        ASSERT_EQ(deriveTrees(classTableToRtg(e.table, e.bottom, e.split.sup), o), lang)
            << formatTreeGrammar(rtgAsCftg(g)) << "---\n" << formatTreeGrammar(rtgAsCftg(classTableToRtg(e.table, e.bottom, e.split.sup)));
    }
}

// Leaves E, F, G with random supertypes over N(-x), B(+x), C(ox); a leaf
// only inherits from constructors or earlier leaves, so there are no cycles.
ClassTable randomLeafTable(Rng& rng) {
    ClassTable ctors = parseClassTable("N(-x) : _\nB(+x) : _\nC(ox) : _\nE : _\nF : _\nG : _\n");
    std::string text = "N(-x) : _\nB(+x) : _\nC(ox) : _\n";
    const std::vector<std::string> leaves{"E", "F", "G"};
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        std::vector<std::string> supers;
        for (std::size_t k = pick(rng, 3); k > 0; --k) {
            if (i > 0 && pick(rng, 4) == 0) {
                supers.push_back(leaves[pick(rng, i)]);
                continue;
            }
            Term t = randomType(rng, ctors, 2);
            if (t.arity() > 0) supers.push_back(t.str());
        }
        text += leaves[i] + " :";
        for (std::size_t k = 0; k < supers.size(); ++k) text += (k ? ", " : " ") + supers[k];
        text += supers.empty() ? " _\n" : "\n";
    }
    return parseClassTable(text);
}

TEST(Properties, RtgExtractionAgreesWithTheDecider) {
    Rng rng(0x5eed000b);
    ClassTable universeTable = parseClassTable("N(-x) : _\nB(+x) : _\nC(ox) : _\nE : _\nF : _\nG : _\n");
    Trees universe;
    for (int i = 0; i < 4000; ++i) universe.insert(randomType(rng, universeTable, 2));
    for (int i = 0; i < 300; ++i) {
        ClassTable t = randomLeafTable(rng);
        if (!checkWellFormed(t).empty()) continue;
        Subtyper s(t);
        DeriveOptions o;
        o.maxHeight = 2;
        Trees lang = deriveTrees(classTableToRtg(t, ty("E"), {}), o);
        for (const Term& x : universe)
            ASSERT_EQ(holds(s.decide({ty("E"), x, Relation::Sub, {}}, {false})), lang.count(x) > 0)
                << formatClassTable(t) << x.str();
    }
}

TEST(Properties, DeterminismReportsAreConsistent) {
    Rng rng(0x5eed000a);
    for (int i = 0; i < 300; ++i) {
        RegularTreeGrammar r = randomRtg(rng);
        ASSERT_TRUE(checkDeterminismCorrespondence(r).consistent()) << formatTreeGrammar(rtgAsCftg(r));
        ASSERT_TRUE(checkDeterminismCorrespondence(randomMonadicGnf(rng)).consistent());
    }
}

}  // namespace
}  // namespace treetop
