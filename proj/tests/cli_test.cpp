#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "json.hpp"
#include "test_util.hpp"
#include "treetop/cli.hpp"
#include "treetop/error.hpp"

namespace treetop {
namespace {

using testing::dataPath;
namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratchDir() {
    fs::path dir = fs::temp_directory_path() / ("treetop_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::create_directories(dir);
    return dir;
}

TEST(CfgFile, ErrorsNameTheFile) {
    fs::path bad = scratchDir() / "broken.cfg";
    std::ofstream(bad) << "S a b\n";
    try {
        parseCfgFile(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), kParse);
        EXPECT_NE(std::string(e.what()).find("broken.cfg"), std::string::npos);
    }
    EXPECT_THROW(parseCfgFile(scratchDir() / "missing.cfg"), Error);
    EXPECT_EQ(parseCfgFile(dataPath("Canvas.cfg")).start, "Canvas");
}

TEST(Commands, CheckReportsDiagnostics) {
    CommandOutput ok = commandCheck(dataPath("pali.table"), false);
    EXPECT_EQ(ok.exitCode, 0);
    EXPECT_EQ(ok.text, "well-formed\n");
    CommandOutput bad = commandCheck(dataPath("invalid.table"), true);
    EXPECT_EQ(bad.exitCode, 1);
    json j = json::parse(bad.text);
    EXPECT_FALSE(j["wellFormed"]);
    EXPECT_EQ(j["diagnostics"][0]["code"], "WF-VARIANCE");
}

TEST(Commands, ClassifyExitCodeFollowsDecidability) {
    CommandOutput pali = commandClassify(dataPath("pali.table"), false);
    EXPECT_EQ(pali.exitCode, 0);
    EXPECT_EQ(pali.text, (FeatureSet{false, true, true}.str() + "\n"));
    CommandOutput exp = commandClassify(dataPath("expansive.table"), true);
    EXPECT_EQ(exp.exitCode, 1);
    json j = json::parse(exp.text);
    EXPECT_TRUE(j["contravariance"]);
    EXPECT_TRUE(j["expansive"]);
    EXPECT_FALSE(j["decidable"]);
}

TEST(Commands, MemberVerdicts) {
    CommandOutput yes = commandMember(dataPath("pali.table"), "v0(E) <: a(b(a(E)))", true);
    EXPECT_EQ(yes.exitCode, 0);
    json j = json::parse(yes.text);
    EXPECT_EQ(j["verdict"], "holds");
    EXPECT_TRUE(j.contains("trace"));

    CommandOutput cyc = commandMember(dataPath("nc.table"), "C <: N(C)", false);
    EXPECT_EQ(cyc.exitCode, 1);
    EXPECT_EQ(cyc.text, "cycle-rejected\n  C <: N(C)\n  N(N(C)) <: N(C)\n  C <: N(C)\n");

    CommandOutput und = commandMember(dataPath("expansive.table"), "d(t) <: a(d(a(t)))", true);
    EXPECT_EQ(und.exitCode, 1);
    EXPECT_EQ(json::parse(und.text)["verdict"], "undecided");

    EXPECT_THROW(commandMember(dataPath("pali.table"), "v0(Q) <: a(E)", false), Error);
}

TEST(Commands, ConvertBetweenForms) {
    CommandOutput t = commandConvert({dataPath("pali.tg"), "", ""}, "table", false);
    EXPECT_EQ(t.exitCode, 0);
    EXPECT_EQ(t.text.substr(0, t.text.find('\n')), "# bottom: v0(E)");
    EXPECT_EQ(parseClassTable(t.text), testing::loadTable("pali.table"));

    CommandOutput r = commandConvert({dataPath("nc.table"), "C", ""}, "rtg", false);
    EXPECT_EQ(r.text, "terminals: N/1 C/0\nvariables: v0/0 v1/0\nstart: v0\nv0 -> N(v1)\nv0 -> C\nv1 -> N(v0)\n");

    CommandOutput gnf = commandConvert({dataPath("Canvas.cfg"), "", ""}, "gnf", false);
    EXPECT_TRUE(isCfgGnf(parseCfg(gnf.text)));

    CommandOutput c = commandConvert({dataPath("pali.table"), "v0(E)", "a,b,E"}, "cftg", true);
    EXPECT_TRUE(json::parse(c.text)["gnf"]);

    EXPECT_THROW(commandConvert({dataPath("nc.table"), "", ""}, "rtg", false), Error);
    EXPECT_THROW(commandConvert({dataPath("bintree.tg"), "", ""}, "gnf", false), Error);
    EXPECT_THROW(commandConvert({dataPath("Canvas.cfg"), "", ""}, "rtg", false), Error);
    EXPECT_THROW(commandConvert({dataPath("Canvas.cfg"), "", ""}, "dot", false), Error);
}

TEST(Commands, GenWritesSourceAndManifest) {
    fs::path dir = scratchDir();
    CommandOutput out = commandGen(dataPath("Canvas.cfg"), true, dir, false);
    EXPECT_EQ(out.exitCode, 0);
    EXPECT_EQ(testing::readText((dir / "CanvasAPI.cs").string()),
              testing::readText(testing::goldenPath("CanvasAPI.listing.cs")));
    json manifest = json::parse(testing::readText((dir / "CanvasAPI.cs.manifest.json").string()));
    EXPECT_EQ(manifest["entry"], "Canvas");
    CommandOutput printed = commandGen(dataPath("Canvas.cfg"), true, std::nullopt, false);
    EXPECT_EQ(printed.text, testing::readText(testing::goldenPath("CanvasAPI.listing.cs")));
}

TEST(Commands, BenchRecordsTheSeed) {
    std::vector<std::size_t> sizes{4, 8};
    CommandOutput out = commandBench(dataPath("Palindrome.cfg"), sizes, 7, false);
    EXPECT_EQ(out.text.substr(0, out.text.find('\n')), "size,elapsed_ms,verdict");
    EXPECT_NE(out.text.find("# grammar=Palindrome seed=7\n"), std::string::npos);
    json j = json::parse(commandBench(dataPath("Palindrome.cfg"), sizes, 7, true).text);
    EXPECT_EQ(j["seed"], 7);
    EXPECT_EQ(j["records"].size(), 2u);
}

TEST(Bench, SameSeedSameQueries) {
    StringCfg g = testing::loadCfg("Palindrome.cfg");
    std::vector<std::size_t> sizes{0, 1, 5, 9, 13};
    auto a = runBench(g, sizes, 42);
    auto b = runBench(g, sizes, 42);
    ASSERT_EQ(a.size(), 5u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].verdict, b[i].verdict);
        ASSERT_TRUE(a[i].cykVerdict);
        EXPECT_EQ(*a[i].cykVerdict, a[i].verdict);
    }
    EXPECT_TRUE(a[0].verdict);
    EXPECT_TRUE(a[1].verdict);
}

TEST(Bench, CsvAndSlope) {
    std::vector<BenchRecord> rs{{"g", 10, 1.0, true, {}}, {"g", 100, 10.0, false, {}}, {"g", 1000, 100.0, true, {}}};
    EXPECT_EQ(benchCsv(rs), "size,elapsed_ms,verdict\n10,1,true\n100,10,false\n1000,100,true\n");
    EXPECT_NEAR(logLogSlope(rs), 1.0, 1e-12);
    std::vector<BenchRecord> quad{{"g", 10, 1.0, true, {}}, {"g", 20, 4.0, true, {}}};
    EXPECT_NEAR(logLogSlope(quad), 2.0, 1e-12);
    std::vector<BenchRecord> one{{"g", 10, 1.0, true, {}}};
    EXPECT_THROW(logLogSlope(one), Error);
}

TEST(Bench, LargeStackPropagatesExceptions) {
    int ran = 0;
    runWithLargeStack([&] { ++ran; });
    EXPECT_EQ(ran, 1);
    EXPECT_THROW(runWithLargeStack([] { throw Error(kOverflow, "boom"); }), Error);
}

}  // namespace
}  // namespace treetop
