#include <cctype>
#include <sstream>

#include "json.hpp"
#include "treetop/class_table.hpp"
#include "treetop/error.hpp"

namespace treetop {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> splitTopLevel(std::string_view s, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == sep && depth == 0) {
            parts.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    parts.push_back(trim(s.substr(start)));
    return parts;
}

[[noreturn]] void lineError(std::size_t line, const std::string& why) {
    throw Error(kParse, "line " + std::to_string(line) + ": " + why);
}

ClassDecl parseDeclLine(std::string_view raw, std::size_t lineNo) {
    std::string line = trim(raw);
    std::string head = line, tail;
    // The header's parameter list never contains ':', so the first top-level
    // colon separates header from supertypes.
    int depth = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '(') ++depth;
        if (line[i] == ')') --depth;
        if (line[i] == ':' && depth == 0) {
            head = trim(std::string_view(line).substr(0, i));
            tail = trim(std::string_view(line).substr(i + 1));
            break;
        }
    }

    ClassDecl decl;
    std::size_t open = head.find('(');
    decl.name = trim(std::string_view(head).substr(0, open));
    if (decl.name.empty()) lineError(lineNo, "missing class name");
    for (char c : decl.name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'')
            lineError(lineNo, "bad class name '" + decl.name + "'");
    if (open != std::string::npos) {
        if (head.back() != ')') lineError(lineNo, "unterminated parameter list");
        std::string inner = head.substr(open + 1, head.size() - open - 2);
        if (!trim(inner).empty()) {
            for (const std::string& p : splitTopLevel(inner, ',')) {
                if (p.size() < 2) lineError(lineNo, "parameter '" + p + "' needs a variance and a name");
                TypeParam tp;
                try {
                    tp.variance = varianceFromChar(p[0]);
                } catch (const Error& e) {
                    lineError(lineNo, e.what());
                }
                tp.name = trim(std::string_view(p).substr(1));
                if (tp.name.empty()) lineError(lineNo, "parameter without a name");
                decl.params.push_back(std::move(tp));
            }
        }
    }

    if (!tail.empty() && tail != "_") {
        auto isParam = [&](std::string_view n) {
            for (const TypeParam& p : decl.params)
                if (p.name == n) return true;
            return false;
        };
        for (const std::string& s : splitTopLevel(tail, ',')) {
            if (s.empty()) lineError(lineNo, "empty supertype");
            try {
                decl.supertypes.push_back(parseTerm(s, isParam));
            } catch (const Error& e) {
                lineError(lineNo, e.what());
            }
        }
    }
    return decl;
}

nlohmann::json patternToJson(const Term& t) {
    if (t.isParam()) return t.name();
    nlohmann::json arr = nlohmann::json::array({t.name()});
    for (const Term& c : t.children()) arr.push_back(patternToJson(c));
    return arr;
}

Term patternFromJson(const nlohmann::json& j) {
    if (j.is_string()) return Term::param(j.get<std::string>());
    if (!j.is_array() || j.empty() || !j[0].is_string())
        throw Error(kParse, "pattern must be a parameter name or [name, children...]");
    std::vector<Term> kids;
    for (std::size_t i = 1; i < j.size(); ++i) kids.push_back(patternFromJson(j[i]));
    return Term::node(j[0].get<std::string>(), std::move(kids));
}

}  // namespace

ClassTable parseClassTable(std::string_view text) {
    ClassTable table;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        ClassDecl decl = parseDeclLine(line, lineNo);
        try {
            table.add(std::move(decl));
        } catch (const Error& e) {
            lineError(lineNo, e.what());
        }
    }
    return table;
}

std::string formatClassTable(const ClassTable& table) {
    std::string out;
    for (const ClassDecl& d : table.decls()) {
        out += d.name;
        if (d.rank() > 0) {
            out += '(';
            for (std::size_t i = 0; i < d.rank(); ++i) {
                if (i) out += ", ";
                out += varianceChar(d.params[i].variance);
                out += d.params[i].name;
            }
            out += ')';
        }
        out += " : ";
        if (d.supertypes.empty()) out += '_';
        for (std::size_t i = 0; i < d.supertypes.size(); ++i) {
            if (i) out += ", ";
            out += d.supertypes[i].str();
        }
        out += '\n';
    }
    return out;
}

ClassTable classTableFromJson(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(kParse, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("classes") || !j["classes"].is_array())
        throw Error(kParse, "class table JSON needs a \"classes\" array");
    ClassTable table;
    try {
        for (const auto& c : j["classes"]) {
            ClassDecl d;
            d.name = c.at("name").get<std::string>();
            for (const auto& p : c.value("params", nlohmann::json::array())) {
                std::string v = p.at("variance").get<std::string>();
                if (v.size() != 1) throw Error(kParse, "variance must be one of + - o");
                d.params.push_back({p.at("name").get<std::string>(), varianceFromChar(v[0])});
            }
            for (const auto& s : c.value("supertypes", nlohmann::json::array()))
                d.supertypes.push_back(patternFromJson(s));
            table.add(std::move(d));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(kParse, std::string("malformed class table JSON: ") + e.what());
    }
    return table;
}

std::string classTableToJson(const ClassTable& table) {
    nlohmann::json classes = nlohmann::json::array();
    for (const ClassDecl& d : table.decls()) {
        nlohmann::json params = nlohmann::json::array();
        for (const TypeParam& p : d.params)
            params.push_back({{"name", p.name}, {"variance", std::string(1, varianceChar(p.variance))}});
        nlohmann::json sups = nlohmann::json::array();
        for (const Term& s : d.supertypes) sups.push_back(patternToJson(s));
        classes.push_back({{"name", d.name}, {"params", params}, {"supertypes", sups}});
    }
    return nlohmann::json{{"classes", classes}}.dump(2);
}

}  // namespace treetop
