#include <pthread.h>

#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <random>
#include <sstream>

#include "treetop/cli.hpp"
#include "treetop/error.hpp"
#include "treetop/transforms.hpp"

namespace treetop {

StringCfg parseCfgFile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(kParse, "cannot read '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parseCfg(buf.str());
    } catch (const Error& e) {
        throw Error(e.code(), path.filename().string() + ": " + e.what());
    }
}

void runWithLargeStack(const std::function<void()>& fn, std::size_t stackBytes) {
    struct Job {
        const std::function<void()>* fn;
        std::exception_ptr error;
    } job{&fn, nullptr};

    pthread_attr_t attr;
    pthread_attr_init(&attr);
    pthread_attr_setstacksize(&attr, stackBytes);
    pthread_t thread;
    auto body = [](void* arg) -> void* {
        auto* j = static_cast<Job*>(arg);
        try {
            (*j->fn)();
        } catch (...) {
            j->error = std::current_exception();
        }
        return nullptr;
    };
    int rc = pthread_create(&thread, &attr, body, &job);
    pthread_attr_destroy(&attr);
    if (rc != 0) {
        fn();
        return;
    }
    pthread_join(thread, nullptr);
    if (job.error) std::rethrow_exception(job.error);
}

std::vector<BenchRecord> runBench(const StringCfg& g, std::span<const std::size_t> sizes, std::uint64_t seed,
                                  const std::string& name) {
    const std::string label = name.empty() ? g.start : name;
    if (g.terminals.empty()) throw Error(kInvalidArgument, label + ": grammar has no terminals");

    std::vector<BenchRecord> records;
    runWithLargeStack([&] {
        std::optional<MachineRecognizer> recognizer;
        try {
            recognizer.emplace(buildSubtypingMachine(g));
        } catch (const Error& e) {
            throw Error(e.code(), label + ": " + e.what());
        }
        CfgRecognizer cyk(g);
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, g.terminals.size() - 1);
        DecideOptions options;
        options.withTrace = false;

        for (std::size_t n : sizes) {
            std::vector<std::string> word;
            word.reserve(n);
            for (std::size_t i = 0; i < n; ++i) word.push_back(g.terminals[pick(rng)]);

            BenchRecord r{label, n, 0.0, false, std::nullopt};
            const auto start = std::chrono::steady_clock::now();
            r.verdict = holds(recognizer->decide(word, options));
            const auto stop = std::chrono::steady_clock::now();
            r.elapsedMs = std::chrono::duration<double, std::milli>(stop - start).count();
            if (n <= 14) {
                r.cykVerdict = cyk.accepts(word);
                if (*r.cykVerdict != r.verdict)
                    throw Error(kInvalidArgument, label + ": machine and CYK disagree at size " + std::to_string(n));
            }
            records.push_back(std::move(r));
        }
    });
    return records;
}

std::string benchCsv(std::span<const BenchRecord> records) {
    std::ostringstream out;
    out << "size,elapsed_ms,verdict\n";
    for (const BenchRecord& r : records) out << r.size << ',' << r.elapsedMs << ',' << (r.verdict ? "true" : "false") << '\n';
    return out.str();
}

double logLogSlope(std::span<const BenchRecord> records) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (const BenchRecord& r : records) {
        if (r.size == 0 || r.elapsedMs <= 0) continue;
        const double x = std::log(static_cast<double>(r.size));
        const double y = std::log(r.elapsedMs);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw Error(kInvalidArgument, "slope needs at least two timed records");
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    if (denom == 0) throw Error(kInvalidArgument, "slope needs two distinct sizes");
    return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

}  // namespace treetop
