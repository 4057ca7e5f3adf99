#include <algorithm>
#include <map>

#include "treetop/error.hpp"
#include "treetop/grammars.hpp"

namespace treetop {

namespace {

std::vector<std::vector<std::string>> nonEmptyVariants(const std::vector<std::string>& rhs,
                                                       const std::set<std::string>& nullable) {
    std::vector<std::vector<std::string>> out{{}};
    for (const std::string& s : rhs) {
        std::vector<std::vector<std::string>> next;
        for (const auto& partial : out) {
            auto keep = partial;
            keep.push_back(s);
            next.push_back(std::move(keep));
            if (nullable.count(s)) next.push_back(partial);
        }
        out = std::move(next);
    }
    std::erase_if(out, [](const auto& r) { return r.empty(); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

using ByLeft = std::vector<std::vector<std::pair<std::size_t, std::size_t>>>;

// CYK chart over spans [i, j) with sparse cells: each cell keeps the list
// of its variables next to a flag per variable.
class Chart {
public:
    Chart(std::size_t maxLength, std::size_t varCount)
        : n_(maxLength + 1), v_(varCount), vars_(n_ * n_), flags_(n_ * n_ * varCount, 0) {}

    bool has(std::size_t i, std::size_t j, std::size_t v) const { return flags_[(i * n_ + j) * v_ + v] != 0; }

    // Recomputes every span ending at `end` from the variables of the last
    // symbol and the spans ending earlier.
    void fillColumn(std::size_t end, const std::vector<std::size_t>& leaf, const ByLeft& byLeft) {
        for (std::size_t i = 0; i < end; ++i) clear(i, end);
        for (std::size_t v : leaf) add(end - 1, end, v);
        for (std::size_t i = end - 1; i-- > 0;)
            for (std::size_t split = i + 1; split < end; ++split)
                for (std::size_t a : vars_[i * n_ + split])
                    for (auto [right, lhs] : byLeft[a])
                        if (has(split, end, right)) add(i, end, lhs);
    }

private:
    void add(std::size_t i, std::size_t j, std::size_t v) {
        char& f = flags_[(i * n_ + j) * v_ + v];
        if (f) return;
        f = 1;
        vars_[i * n_ + j].push_back(v);
    }

    void clear(std::size_t i, std::size_t j) {
        for (std::size_t v : vars_[i * n_ + j]) flags_[(i * n_ + j) * v_ + v] = 0;
        vars_[i * n_ + j].clear();
    }

    std::size_t n_, v_;
    std::vector<std::vector<std::size_t>> vars_;
    std::vector<char> flags_;
};

}  // namespace

CfgRecognizer::CfgRecognizer(const StringCfg& g) : acceptsEmpty_(acceptsEmpty(g)), terminals_(g.terminals) {
    std::sort(terminals_.begin(), terminals_.end());
    std::map<std::string, std::size_t> varId;
    for (const std::string& v : g.variables) varId.emplace(v, varId.size());
    start_ = varId.at(g.start);
    varCount_ = varId.size();
    std::map<std::string, std::size_t> termId;
    for (const std::string& t : terminals_) termId.emplace(t, termId.size());
    byTerminal_.assign(terminals_.size(), {});

    const std::set<std::string> nullable = nullableVariables(g);
    std::vector<std::vector<std::vector<std::string>>> rules(varCount_);
    for (const CfgProduction& p : g.productions)
        for (auto& r : nonEmptyVariants(p.rhs, nullable)) rules[varId.at(p.lhs)].push_back(std::move(r));

    // Unit closure: unit[a] holds every b with a =>* b by unit productions.
    std::vector<std::set<std::size_t>> unit(varCount_);
    for (std::size_t a = 0; a < varCount_; ++a) {
        unit[a].insert(a);
        std::vector<std::size_t> work{a};
        while (!work.empty()) {
            std::size_t b = work.back();
            work.pop_back();
            for (const auto& r : rules[b])
                if (r.size() == 1 && varId.count(r[0]) && unit[a].insert(varId.at(r[0])).second)
                    work.push_back(varId.at(r[0]));
        }
    }

    std::map<std::string, std::size_t> preterminal;
    auto symbolVar = [&](const std::string& s) -> std::size_t {
        if (auto v = varId.find(s); v != varId.end()) return v->second;
        auto [it, added] = preterminal.emplace(s, varCount_);
        if (added) {
            byTerminal_[termId.at(s)].push_back(varCount_);
            ++varCount_;
        }
        return it->second;
    };

    for (std::size_t a = 0; a < varId.size(); ++a) {
        std::set<std::vector<std::string>> effective;
        for (std::size_t b : unit[a])
            for (const auto& r : rules[b])
                if (r.size() > 1 || !varId.count(r[0])) effective.insert(r);
        for (const auto& r : effective) {
            if (r.size() == 1) {
                auto& list = byTerminal_[termId.at(r[0])];
                if (std::find(list.begin(), list.end(), a) == list.end()) list.push_back(a);
                continue;
            }
            std::size_t lhs = a;
            for (std::size_t i = 0; i + 2 < r.size(); ++i) {
                std::size_t rest = varCount_++;
                binaries_.push_back({lhs, symbolVar(r[i]), rest});
                lhs = rest;
            }
            binaries_.push_back({lhs, symbolVar(r[r.size() - 2]), symbolVar(r.back())});
        }
    }
    byLeft_.assign(varCount_, {});
    for (const Binary& b : binaries_) byLeft_[b.left].emplace_back(b.right, b.lhs);
}

bool CfgRecognizer::accepts(std::span<const std::string> word) const {
    const std::size_t n = word.size();
    if (n == 0) return acceptsEmpty_;
    Chart chart(n, varCount_);
    for (std::size_t k = 0; k < n; ++k) {
        auto it = std::lower_bound(terminals_.begin(), terminals_.end(), word[k]);
        if (it == terminals_.end() || *it != word[k]) return false;
        chart.fillColumn(k + 1, byTerminal_[static_cast<std::size_t>(it - terminals_.begin())], byLeft_);
    }
    return chart.has(0, n, start_);
}

void CfgRecognizer::forEachWord(std::size_t maxLength,
                                const std::function<void(std::span<const std::string>, bool)>& fn) const {
    if (maxLength == 0 || terminals_.empty()) return;
    Chart chart(maxLength, varCount_);
    std::vector<std::string> word;
    std::function<void()> extend = [&] {
        for (std::size_t t = 0; t < terminals_.size(); ++t) {
            word.push_back(terminals_[t]);
            chart.fillColumn(word.size(), byTerminal_[t], byLeft_);
            fn(word, chart.has(0, word.size(), start_));
            if (word.size() < maxLength) extend();
            word.pop_back();
        }
    };
    extend();
}

bool cykMember(const StringCfg& g, std::span<const std::string> word) { return CfgRecognizer(g).accepts(word); }

}  // namespace treetop
