#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treetop/grammars.hpp"

namespace treetop {

// Reads and parses a `.cfg` grammar file; errors carry the file name.
StringCfg parseCfgFile(const std::filesystem::path& path);

struct BenchRecord {
    std::string grammar;
    std::size_t size = 0;
    double elapsedMs = 0;
    bool verdict = false;
    // CYK verdict for short queries, which must equal `verdict`.
    std::optional<bool> cykVerdict;
};

// One random query per size: tokens drawn uniformly from the terminal
// alphabet with a generator seeded once from `seed`, encoded as a chain type
// and decided against the grammar's subtyping machine. Timing covers query
// encoding and the decision. Throws if a cross-check disagrees.
std::vector<BenchRecord> runBench(const StringCfg& g, std::span<const std::size_t> sizes, std::uint64_t seed,
                                  const std::string& name = {});

// `size,elapsed_ms,verdict` with one line per record.
std::string benchCsv(std::span<const BenchRecord> records);

// Least-squares slope of log(elapsed) against log(size), over records with
// positive size and time.
double logLogSlope(std::span<const BenchRecord> records);

// Runs `fn` on a thread with a large stack; deep proof searches on long
// chains recurse once per token. Exceptions are rethrown in the caller.
void runWithLargeStack(const std::function<void()>& fn, std::size_t stackBytes = std::size_t{1} << 30);

// Command implementations behind the `treetop` tool. Each returns the text
// to print and the exit code (0 iff the verdict is positive).
struct CommandOutput {
    int exitCode = 0;
    std::string text;
};

struct TableInput {
    std::filesystem::path path;
    std::string bottom;  // subtype for extraction; required by convert from a table
    std::string top;     // comma-separated super-alphabet; empty = all classes
};

CommandOutput commandCheck(const std::filesystem::path& table, bool json);
CommandOutput commandClassify(const std::filesystem::path& table, bool json);
CommandOutput commandMember(const std::filesystem::path& table, const std::string& query, bool json);
// Input kind by extension: .cfg string grammar, .tg tree grammar, anything
// else a class table (.json in JSON form). Targets: rtg, cftg, table, gnf.
CommandOutput commandConvert(const TableInput& input, const std::string& target, bool json);
CommandOutput commandGen(const std::filesystem::path& cfg, bool fluent, const std::optional<std::filesystem::path>& out,
                         bool json);
CommandOutput commandBench(const std::filesystem::path& cfg, std::span<const std::size_t> sizes, std::uint64_t seed,
                           bool json);

}  // namespace treetop
