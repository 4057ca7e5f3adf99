#include <algorithm>
#include <map>
#include <unordered_map>

#include "treetop/error.hpp"
#include "treetop/grammars.hpp"

namespace treetop {

bool StringCfg::isVariable(std::string_view s) const {
    return std::find(variables.begin(), variables.end(), s) != variables.end();
}

bool StringCfg::isTerminal(std::string_view s) const {
    return std::binary_search(terminals.begin(), terminals.end(), s);
}

StringCfg makeCfg(std::vector<CfgProduction> productions, std::string start) {
    StringCfg g;
    for (const CfgProduction& p : productions)
        if (!g.isVariable(p.lhs)) g.variables.push_back(p.lhs);
    if (g.variables.empty() && start.empty()) throw Error(kInvalidArgument, "grammar has no productions");
    g.start = start.empty() ? g.variables.front() : std::move(start);
    if (!g.isVariable(g.start)) g.variables.insert(g.variables.begin(), g.start);
    std::set<std::string> terms;
    for (const CfgProduction& p : productions)
        for (const std::string& s : p.rhs)
            if (!g.isVariable(s)) terms.insert(s);
    g.terminals.assign(terms.begin(), terms.end());
    g.productions = std::move(productions);
    return g;
}

std::set<std::string> nullableVariables(const StringCfg& g) {
    std::set<std::string> nullable;
    for (bool changed = true; changed;) {
        changed = false;
        for (const CfgProduction& p : g.productions) {
            if (nullable.count(p.lhs)) continue;
            bool all = std::all_of(p.rhs.begin(), p.rhs.end(), [&](const std::string& s) { return nullable.count(s) > 0; });
            if (all) changed = nullable.insert(p.lhs).second || changed;
        }
    }
    return nullable;
}

bool acceptsEmpty(const StringCfg& g) { return g.emptyWord || nullableVariables(g).count(g.start) > 0; }

bool isCfgGnf(const StringCfg& g) {
    return std::all_of(g.productions.begin(), g.productions.end(), [&](const CfgProduction& p) {
        return !p.rhs.empty() && !g.isVariable(p.rhs.front());
    });
}

StringCfg reverseCfg(const StringCfg& g) {
    StringCfg out = g;
    for (CfgProduction& p : out.productions) std::reverse(p.rhs.begin(), p.rhs.end());
    return out;
}

Cftg cfgToMonadicCftg(const StringCfg& g, const std::string& endMarker, const std::string& param) {
    if (!isCfgGnf(g)) throw Error(kNotGnf, "string grammar is not terminal-headed");
    if (g.isVariable(endMarker) || g.isTerminal(endMarker))
        throw Error(kNameClash, "end marker '" + endMarker + "' is already a grammar symbol");

    Cftg out;
    for (const std::string& t : g.terminals) out.terminals.push_back({t, 1});
    out.terminals.push_back({endMarker, 0});
    for (const std::string& v : g.variables) out.variables.push_back({v, 1});

    const Term x = Term::param(param);
    for (const CfgProduction& p : g.productions) {
        Term body = x;
        for (auto it = p.rhs.rbegin(); it != p.rhs.rend(); ++it) body = Term::node(*it, {body});
        out.productions.push_back({p.lhs, {param}, body});
    }
    out.initial = Term::node(g.start, {Term::leaf(endMarker)});
    if (acceptsEmpty(g)) out.emptyTree = Term::leaf(endMarker);
    return out;
}

std::set<std::vector<std::string>> wordsUpTo(const StringCfg& g, std::size_t maxLength) {
    using Word = std::vector<std::size_t>;
    std::map<std::string, std::size_t> tokenId;
    for (const std::string& t : g.terminals) tokenId.emplace(t, tokenId.size());
    std::map<std::string, std::size_t> varId;
    for (const std::string& v : g.variables) varId.emplace(v, varId.size());

    std::vector<std::set<Word>> lang(g.variables.size());
    for (bool changed = true; changed;) {
        changed = false;
        for (const CfgProduction& p : g.productions) {
            std::set<Word> partial{Word{}};
            for (const std::string& sym : p.rhs) {
                std::set<Word> next;
                if (auto v = varId.find(sym); v != varId.end()) {
                    for (const Word& w : partial)
                        for (const Word& tail : lang[v->second]) {
                            if (w.size() + tail.size() > maxLength) continue;
                            Word joined = w;
                            joined.insert(joined.end(), tail.begin(), tail.end());
                            next.insert(std::move(joined));
                        }
                } else {
                    for (const Word& w : partial) {
                        if (w.size() + 1 > maxLength) continue;
                        Word joined = w;
                        joined.push_back(tokenId.at(sym));
                        next.insert(std::move(joined));
                    }
                }
                partial = std::move(next);
                if (partial.empty()) break;
            }
            auto& target = lang[varId.at(p.lhs)];
            for (const Word& w : partial) changed = target.insert(w).second || changed;
        }
    }

    std::set<std::vector<std::string>> out;
    for (const Word& w : lang[varId.at(g.start)]) {
        std::vector<std::string> word;
        for (std::size_t id : w) word.push_back(g.terminals[id]);
        out.insert(std::move(word));
    }
    if (g.emptyWord) out.insert(std::vector<std::string>{});
    return out;
}

}  // namespace treetop
