#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "treetop/error.hpp"
#include "treetop/grammars.hpp"

namespace treetop {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> words(std::string_view s) {
    std::istringstream in{std::string(s)};
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

[[noreturn]] void lineError(std::size_t line, const std::string& why) {
    throw Error(kParse, "line " + std::to_string(line) + ": " + why);
}

template <typename Fn>
void forEachLine(std::string_view text, Fn&& fn) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (!t.empty()) fn(t, lineNo);
    }
}

}  // namespace

StringCfg parseCfg(std::string_view text) {
    std::vector<CfgProduction> productions;
    forEachLine(text, [&](const std::string& line, std::size_t lineNo) {
        auto arrow = line.find("::=");
        if (arrow == std::string::npos) lineError(lineNo, "expected 'LHS ::= symbols'");
        std::vector<std::string> lhs = words(std::string_view(line).substr(0, arrow));
        if (lhs.size() != 1) lineError(lineNo, "left-hand side must be a single symbol");
        productions.push_back({lhs[0], words(std::string_view(line).substr(arrow + 3))});
    });
    if (productions.empty()) throw Error(kParse, "grammar has no productions");
    return makeCfg(std::move(productions));
}

std::string formatCfg(const StringCfg& g) {
    std::string out;
    if (g.emptyWord && !acceptsEmpty(StringCfg{g.start, g.variables, g.terminals, g.productions, false}))
        out += "# accepts the empty word\n";
    for (const CfgProduction& p : g.productions) {
        out += p.lhs + " ::=";
        for (const std::string& s : p.rhs) out += " " + s;
        out += '\n';
    }
    return out;
}

StringCfg cfgFromJson(std::string_view text) {
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        std::vector<CfgProduction> productions;
        for (const auto& p : j.at("productions"))
            productions.push_back({p.at("lhs").get<std::string>(), p.at("rhs").get<std::vector<std::string>>()});
        if (productions.empty()) throw Error(kParse, "grammar has no productions");
        StringCfg g = makeCfg(std::move(productions), j.value("start", std::string{}));
        g.emptyWord = j.value("emptyWord", false);
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw Error(kParse, std::string("malformed grammar JSON: ") + e.what());
    }
}

std::string cfgToJson(const StringCfg& g) {
    nlohmann::json ps = nlohmann::json::array();
    for (const CfgProduction& p : g.productions) ps.push_back({{"lhs", p.lhs}, {"rhs", p.rhs}});
    nlohmann::json j{{"start", g.start},
                     {"variables", g.variables},
                     {"terminals", g.terminals},
                     {"emptyWord", g.emptyWord},
                     {"productions", ps}};
    return j.dump(2);
}

Cftg parseTreeGrammar(std::string_view text) {
    Cftg g;
    bool declaredTerminals = false;
    std::string startText, emptyText;
    struct Pending {
        std::string lhs;
        std::vector<std::string> params;
        std::string rhs;
        std::size_t line;
    };
    std::vector<Pending> pending;

    forEachLine(text, [&](const std::string& line, std::size_t lineNo) {
        auto keyword = [&](std::string_view kw) {
            return line.rfind(kw, 0) == 0 ? std::optional<std::string>(trim(line.substr(kw.size()))) : std::nullopt;
        };
        if (auto t = keyword("terminals:")) {
            declaredTerminals = true;
            for (const std::string& w : words(*t)) {
                auto slash = w.find('/');
                if (slash == std::string::npos) lineError(lineNo, "terminal '" + w + "' needs a rank, as in a/1");
                g.terminals.push_back({w.substr(0, slash), std::stoul(w.substr(slash + 1))});
            }
            return;
        }
        if (auto vs = keyword("variables:")) {
            for (const std::string& w : words(*vs)) {
                auto slash = w.find('/');
                if (slash == std::string::npos) lineError(lineNo, "variable '" + w + "' needs a rank, as in v/1");
                g.variables.push_back({w.substr(0, slash), std::stoul(w.substr(slash + 1))});
            }
            return;
        }
        if (auto s = keyword("start:")) {
            startText = *s;
            return;
        }
        if (auto e = keyword("empty:")) {
            emptyText = *e;
            return;
        }
        auto arrow = line.find("->");
        if (arrow == std::string::npos) lineError(lineNo, "expected 'v(x...) -> tree'");
        std::string lhs = trim(std::string_view(line).substr(0, arrow));
        Pending p{lhs, {}, trim(std::string_view(line).substr(arrow + 2)), lineNo};
        if (auto open = lhs.find('('); open != std::string::npos) {
            if (lhs.back() != ')') lineError(lineNo, "unterminated parameter list");
            p.lhs = trim(std::string_view(lhs).substr(0, open));
            std::string inner = lhs.substr(open + 1, lhs.size() - open - 2);
            std::replace(inner.begin(), inner.end(), ',', ' ');
            p.params = words(inner);
        }
        if (p.lhs.empty()) lineError(lineNo, "missing variable name");
        pending.push_back(std::move(p));
    });
    if (startText.empty()) throw Error(kParse, "tree grammar needs a 'start:' line");

    for (const Pending& p : pending) {
        const RankedSymbol* v = g.findVariable(p.lhs);
        if (!v) g.variables.push_back({p.lhs, p.params.size()});
        else if (v->rank != p.params.size()) lineError(p.line, "variable '" + p.lhs + "' used with two ranks");
    }

    std::map<std::string, std::size_t> inferred;
    std::vector<std::string> inferredOrder;
    std::function<void(const Term&, std::size_t)> infer = [&](const Term& t, std::size_t lineNo) {
        if (t.isParam()) return;
        if (!g.isVariable(t.name()) && !declaredTerminals) {
            auto [it, added] = inferred.emplace(t.name(), t.arity());
            if (added) inferredOrder.push_back(t.name());
            else if (it->second != t.arity()) lineError(lineNo, "symbol '" + t.name() + "' used with two ranks");
        }
        for (const Term& c : t.children()) infer(c, lineNo);
    };

    for (const Pending& p : pending) {
        auto isParam = [&](std::string_view n) { return std::find(p.params.begin(), p.params.end(), n) != p.params.end(); };
        Term rhs;
        try {
            rhs = parseTerm(p.rhs, isParam);
        } catch (const Error& e) {
            lineError(p.line, e.what());
        }
        infer(rhs, p.line);
        g.productions.push_back({p.lhs, p.params, rhs});
    }
    g.initial = parseTerm(startText);
    infer(g.initial, 0);
    if (!emptyText.empty()) {
        g.emptyTree = parseTerm(emptyText);
        infer(*g.emptyTree, 0);
    }
    for (const std::string& n : inferredOrder) g.terminals.push_back({n, inferred[n]});
    validateCftg(g);
    return g;
}

std::string formatTreeGrammar(const Cftg& g) {
    std::string out = "terminals:";
    for (const RankedSymbol& t : g.terminals) out += " " + t.name + "/" + std::to_string(t.rank);
    out += "\nvariables:";
    for (const RankedSymbol& v : g.variables) out += " " + v.name + "/" + std::to_string(v.rank);
    out += "\nstart: " + g.initial.str() + "\n";
    if (g.emptyTree) out += "empty: " + g.emptyTree->str() + "\n";
    for (const CftgProduction& p : g.productions) {
        out += p.lhs;
        if (!p.params.empty()) {
            out += '(';
            for (std::size_t i = 0; i < p.params.size(); ++i) out += (i ? ", " : "") + p.params[i];
            out += ')';
        }
        out += " -> " + p.rhs.str() + "\n";
    }
    return out;
}

}  // namespace treetop
