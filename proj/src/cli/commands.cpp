#include <fstream>
#include <sstream>

#include "json.hpp"
#include "treetop/cli.hpp"
#include "treetop/codegen.hpp"
#include "treetop/error.hpp"
#include "treetop/transforms.hpp"

namespace treetop {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string readFile(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(kParse, "cannot read '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void writeFile(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(kInvalidArgument, "cannot write '" + path.string() + "'");
    out << text;
}

ClassTable loadTable(const fs::path& path) {
    std::string text = readFile(path);
    return path.extension() == ".json" ? classTableFromJson(text) : parseClassTable(text);
}

std::set<std::string> splitTop(const std::string& top) {
    std::set<std::string> out;
    std::string cur;
    for (char c : top + ",") {
        if (c == ',' || c == ' ') {
            if (!cur.empty()) out.insert(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

json diagnosticsJson(const std::vector<Diagnostic>& ds) {
    json arr = json::array();
    for (const Diagnostic& d : ds) arr.push_back({{"code", d.code}, {"class", d.className}, {"message", d.message}});
    return arr;
}

std::string diagnosticsText(const std::vector<Diagnostic>& ds) {
    std::string out;
    for (const Diagnostic& d : ds) out += d.code + " " + d.className + ": " + d.message + "\n";
    return out;
}

CommandOutput emit(bool asJson, const json& j, std::string text, int exitCode) {
    return {exitCode, asJson ? j.dump(2) + "\n" : std::move(text)};
}

std::string encodedText(const EncodedTable& e) {
    std::string out = "# bottom: " + e.bottom.str() + "\n# top:";
    for (const std::string& s : e.split.sup) out += " " + s;
    return out + "\n" + formatClassTable(e.table);
}

CommandOutput encodedOutput(const EncodedTable& e, bool asJson) {
    json j{{"bottom", e.bottom.str()},
           {"top", std::vector<std::string>(e.split.sup.begin(), e.split.sup.end())},
           {"table", json::parse(classTableToJson(e.table))}};
    return emit(asJson, j, encodedText(e), 0);
}

CommandOutput treeGrammarOutput(const Cftg& g, bool asJson) {
    std::string text = formatTreeGrammar(g);
    return emit(asJson, json{{"format", "tree-grammar"}, {"gnf", isGnf(g).gnf}, {"text", text}}, text, 0);
}

}  // namespace

CommandOutput commandCheck(const fs::path& table, bool asJson) {
    const std::vector<Diagnostic> ds = checkWellFormed(loadTable(table));
    return emit(asJson, json{{"wellFormed", ds.empty()}, {"diagnostics", diagnosticsJson(ds)}},
                ds.empty() ? "well-formed\n" : diagnosticsText(ds), ds.empty() ? 0 : 1);
}

CommandOutput commandClassify(const fs::path& table, bool asJson) {
    const ClassTable t = loadTable(table);
    if (auto ds = checkWellFormed(t); !ds.empty())
        return emit(asJson, json{{"wellFormed", false}, {"diagnostics", diagnosticsJson(ds)}}, diagnosticsText(ds), 1);
    const FeatureSet f = classify(t);
    json j{{"wellFormed", true},
           {"contravariance", f.contravariance},
           {"expansive", f.expansive},
           {"multipleInstantiation", f.multipleInstantiation},
           {"decidable", f.decidable()}};
    return emit(asJson, j, f.str() + "\n", f.decidable() ? 0 : 1);
}

CommandOutput commandMember(const fs::path& table, const std::string& query, bool asJson) {
    const ClassTable t = loadTable(table);
    const SubtypeQuery q = parseQuery(query);
    const Verdict v = decide(t, q);
    json j{{"query", q.judgement().str()}, {"verdict", verdictName(v)}};
    std::string text = std::string(verdictName(v)) + "\n";
    if (const Holds* h = std::get_if<Holds>(&v); h && h->trace) j["trace"] = json::parse(traceToJson(*h->trace));
    if (const CycleRejected* c = std::get_if<CycleRejected>(&v)) {
        json cycle = json::array();
        for (const Judgement& step : c->cycle) {
            cycle.push_back(step.str());
            text += "  " + step.str() + "\n";
        }
        j["cycle"] = cycle;
    }
    if (const Undecided* u = std::get_if<Undecided>(&v)) {
        j["reason"] = u->reason;
        text += "  " + u->reason + "\n";
    }
    return emit(asJson, j, text, holds(v) ? 0 : 1);
}

CommandOutput commandConvert(const TableInput& input, const std::string& target, bool asJson) {
    if (target != "rtg" && target != "cftg" && target != "table" && target != "gnf")
        throw Error(kInvalidArgument, "unknown target '" + target + "' (expected rtg, cftg, table or gnf)");
    const std::string ext = input.path.extension().string();

    if (ext == ".cfg") {
        const StringCfg g = parseCfgFile(input.path);
        if (target == "gnf") {
            StringCfg gnf = cfgToGnf(g);
            return emit(asJson, json::parse(cfgToJson(gnf)), formatCfg(gnf), 0);
        }
        if (target == "cftg") return treeGrammarOutput(cfgToMonadicCftg(cfgToGnf(g), "E"), asJson);
        if (target == "table") return encodedOutput(buildSubtypingMachine(g).encoded, asJson);
        throw Error(kFragmentRefused, "a string grammar has no regular tree grammar form");
    }

    if (ext == ".tg") {
        const Cftg g = parseTreeGrammar(readFile(input.path));
        if (target == "table") {
            if (auto r = cftgAsRtg(g)) return encodedOutput(rtgToClassTable(*r), asJson);
            return encodedOutput(gnfCftgToClassTable(g), asJson);
        }
        if (target == "rtg") {
            if (!cftgAsRtg(g)) throw Error(kFragmentRefused, "tree grammar is not regular");
            return treeGrammarOutput(g, asJson);
        }
        if (target == "gnf") {
            if (GnfReport r = isGnf(g); !r.gnf) throw Error(kNotGnf, "tree grammar is not in GNF");
        }
        return treeGrammarOutput(g, asJson);
    }

    const ClassTable table = loadTable(input.path);
    if (target == "table") {
        std::string text = formatClassTable(table);
        return emit(asJson, json::parse(classTableToJson(table)), text, 0);
    }
    if (input.bottom.empty()) throw Error(kInvalidArgument, "extracting a grammar from a table needs --bottom");
    const Term bottom = parseTerm(input.bottom);
    const std::set<std::string> top = splitTop(input.top);
    if (target == "rtg") {
        QueryGrammar q = extractRtg(table, bottom, top);
        return treeGrammarOutput(rtgAsCftg(q.grammar), asJson);
    }
    return treeGrammarOutput(classTableToGnfCftg(table, bottom, top), asJson);
}

CommandOutput commandGen(const fs::path& cfgPath, bool fluent, const std::optional<fs::path>& out, bool asJson) {
    const StringCfg g = parseCfgFile(cfgPath);
    EmitterConfig cfg;
    cfg.fluent = fluent;
    const GeneratedSource src = generateApi(g, cfg);
    const std::string text = src.fileText();

    std::string message = text;
    if (out) {
        fs::path file = *out;
        if (fs::is_directory(file)) file /= src.namespaceName + "." + CSharpDialect{}.fileExtension();
        writeFile(file, text);
        fs::path manifest = file;
        manifest += ".manifest.json";
        writeFile(manifest, src.manifestJson());
        message = "wrote " + file.string() + "\n";
    }
    json j{{"namespace", src.namespaceName}, {"source", text}, {"manifest", src.manifest}};
    return emit(asJson, j, message, 0);
}

CommandOutput commandBench(const fs::path& cfgPath, std::span<const std::size_t> sizes, std::uint64_t seed,
                           bool asJson) {
    const StringCfg g = parseCfgFile(cfgPath);
    const std::string name = cfgPath.stem().string();
    const std::vector<BenchRecord> records = runBench(g, sizes, seed, name);

    json arr = json::array();
    for (const BenchRecord& r : records) {
        json rec{{"size", r.size}, {"elapsed_ms", r.elapsedMs}, {"verdict", r.verdict}};
        if (r.cykVerdict) rec["cyk"] = *r.cykVerdict;
        arr.push_back(rec);
    }
    json j{{"grammar", name}, {"seed", seed}, {"records", arr}};
    return emit(asJson, j, benchCsv(records) + "# grammar=" + name + " seed=" + std::to_string(seed) + "\n", 0);
}

}  // namespace treetop
