// treetop: command-line front end for class tables, tree grammars and
// string grammars.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "treetop/cli.hpp"
#include "treetop/error.hpp"

namespace {

std::vector<std::size_t> parseSizes(const std::string& text) {
    std::vector<std::size_t> sizes;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        if (item.empty()) continue;
        sizes.push_back(std::stoul(item));
    }
    if (sizes.empty()) throw treetop::Error(treetop::kInvalidArgument, "--sizes needs at least one size");
    return sizes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subtyping machines: class tables, tree grammars and fluent API generation"};
    app.require_subcommand(1);
    app.fallthrough();
    bool json = false;
    app.add_flag("--json", json, "Print one JSON object instead of text");

    std::string table, query, input, target, bottom, top, cfg, sizes = "300,600,900,1200,1500,1800,2100,2400,2700";
    std::string outPath;
    bool fluent = false;
    std::uint64_t seed = 1;

    auto* check = app.add_subcommand("check", "Report well-formedness diagnostics of a class table");
    check->add_option("table", table, "Class table (.json or text)")->required();

    auto* classify = app.add_subcommand("classify", "Report the C/X/M features of a class table");
    classify->add_option("table", table, "Class table (.json or text)")->required();

    auto* member = app.add_subcommand("member", "Decide a subtyping query against a class table");
    member->add_option("table", table, "Class table (.json or text)")->required();
    member->add_option("query", query, "Query such as \"v0(E) <: a(E)\"")->required();

    auto* convert = app.add_subcommand("convert", "Convert between grammars and class tables");
    convert->add_option("input", input, ".cfg string grammar, .tg tree grammar, or class table")->required();
    convert->add_option("--to", target, "rtg, cftg, table or gnf")->required()->check(
        CLI::IsMember({"rtg", "cftg", "table", "gnf"}));
    convert->add_option("--bottom", bottom, "Fixed subtype when extracting a grammar from a table");
    convert->add_option("--top", top, "Comma-separated super-alphabet (default: all classes)");

    auto* gen = app.add_subcommand("gen", "Generate the C# subtyping machine for a .cfg grammar");
    gen->add_option("grammar", cfg, ".cfg grammar file")->required();
    gen->add_flag("--fluent", fluent, "Also emit the fluent API");
    gen->add_option("-o,--output", outPath, "Output file or directory");

    auto* bench = app.add_subcommand("bench", "Time random membership queries against a grammar's machine");
    bench->add_option("grammar", cfg, ".cfg grammar file")->required();
    bench->add_option("--sizes", sizes, "Comma-separated query lengths");
    bench->add_option("--seed", seed, "Random seed");

    CLI11_PARSE(app, argc, argv);

    try {
        treetop::CommandOutput result;
        if (*check) result = treetop::commandCheck(table, json);
        else if (*classify) result = treetop::commandClassify(table, json);
        else if (*member) result = treetop::commandMember(table, query, json);
        else if (*convert) result = treetop::commandConvert({input, bottom, top}, target, json);
        else if (*gen)
            result = treetop::commandGen(cfg, fluent,
                                         outPath.empty() ? std::nullopt : std::optional<std::filesystem::path>(outPath),
                                         json);
        else if (*bench) {
            std::vector<std::size_t> list = parseSizes(sizes);
            result = treetop::commandBench(cfg, list, seed, json);
        }
        std::cout << result.text;
        return result.exitCode;
    } catch (const treetop::Error& e) {
        if (json) std::cout << "{\"error\": \"" << e.code() << "\"}\n";
        std::cerr << "treetop: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "treetop: " << e.what() << "\n";
        return 2;
    }
}
