#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

#include "treetop/codegen.hpp"
#include "treetop/error.hpp"

namespace treetop {

namespace {

std::string collapse(std::string_view s) {
    std::string out;
    bool space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
            continue;
        }
        if (space) out += ' ';
        space = false;
        out += c;
    }
    return out;
}

std::vector<std::string> splitTopLevel(std::string_view s) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '<') ++depth;
        if (c == '>') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(collapse(cur));
            cur.clear();
            continue;
        }
        cur += c;
    }
    if (!collapse(cur).empty()) parts.push_back(collapse(cur));
    return parts;
}

Term parseCsType(const std::string& text) {
    std::string t = text;
    std::replace(t.begin(), t.end(), '<', '(');
    std::replace(t.begin(), t.end(), '>', ')');
    return parseTerm(t, [](std::string_view) { return false; });
}

struct InterfaceDecl {
    std::string name;
    std::vector<std::string> params;
    std::vector<std::string> supers;
};

}  // namespace

std::string normalizeApiSource(std::string_view source) {
    const std::string text(source);
    std::vector<InterfaceDecl> decls;
    const std::string marker = "public interface ";
    for (std::size_t pos = text.find(marker); pos != std::string::npos; pos = text.find(marker, pos)) {
        pos += marker.size();
        std::size_t end = text.find("{}", pos);
        if (end == std::string::npos) throw Error(kParse, "unterminated interface declaration");
        std::string decl = text.substr(pos, end - pos);
        pos = end;

        InterfaceDecl d;
        std::string head = decl, supers;
        int depth = 0;
        for (std::size_t i = 0; i < decl.size(); ++i) {
            if (decl[i] == '<') ++depth;
            if (decl[i] == '>') --depth;
            if (decl[i] == ':' && depth == 0) {
                head = decl.substr(0, i);
                supers = decl.substr(i + 1);
                break;
            }
        }
        head = collapse(head);
        if (auto open = head.find('<'); open != std::string::npos) {
            d.name = collapse(head.substr(0, open));
            d.params = splitTopLevel(head.substr(open + 1, head.rfind('>') - open - 1));
        } else {
            d.name = head;
        }
        d.supers = splitTopLevel(supers);
        decls.push_back(std::move(d));
    }

    std::map<std::pair<std::string, std::size_t>, std::string> renamed;
    for (const InterfaceDecl& d : decls)
        if (!d.params.empty() && !d.supers.empty())
            renamed.emplace(std::pair{d.name, d.params.size()}, "V" + std::to_string(renamed.size() + 1));

    std::function<std::string(const Term&)> render = [&](const Term& t) {
        std::string name = t.name();
        if (auto it = renamed.find({name, t.arity()}); it != renamed.end()) name = it->second;
        if (t.arity() == 0) return name;
        name += '<';
        for (std::size_t i = 0; i < t.arity(); ++i) name += (i ? ", " : "") + render(t.child(i));
        return name + '>';
    };

    std::vector<std::string> lines;
    for (const InterfaceDecl& d : decls) {
        std::string line = "interface ";
        auto it = renamed.find({d.name, d.params.size()});
        line += it == renamed.end() ? d.name : it->second;
        if (!d.params.empty()) {
            line += '<';
            for (std::size_t i = 0; i < d.params.size(); ++i) line += (i ? ", " : "") + d.params[i];
            line += '>';
        }
        std::vector<std::string> supers;
        for (const std::string& s : d.supers) supers.push_back(render(parseCsType(s)));
        std::sort(supers.begin(), supers.end());
        for (std::size_t i = 0; i < supers.size(); ++i) line += (i ? " | " : " : ") + supers[i];
        lines.push_back(line);
    }

    std::istringstream in(text);
    for (std::string raw; std::getline(in, raw);) {
        std::string line = collapse(raw);
        if (line.rfind("public ", 0) != 0 || line.rfind(marker, 0) == 0) continue;
        if (line.size() >= 2 && line.substr(line.size() - 2) == " {") line.resize(line.size() - 2);
        lines.push_back("member " + line);
    }

    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const std::string& l : lines) out += l + "\n";
    return out;
}

}  // namespace treetop
