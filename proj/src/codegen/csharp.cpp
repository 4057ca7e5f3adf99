#include <algorithm>
#include <cctype>

#include "json.hpp"
#include "treetop/codegen.hpp"
#include "treetop/error.hpp"

namespace treetop {

namespace {

constexpr std::size_t kLineWidth = 90;
constexpr std::string_view kChainParam = "_x";
constexpr std::string_view kList = "System.Collections.Generic.List";

bool isKeyword(std::string_view s) {
    static const std::set<std::string_view> keywords{
        "abstract", "as",       "base",     "bool",      "break",     "byte",     "case",     "catch",
        "char",     "checked",  "class",    "const",     "continue",  "decimal",  "default",  "delegate",
        "do",       "double",   "else",     "enum",      "event",     "explicit", "extern",   "false",
        "finally",  "fixed",    "float",    "for",       "foreach",   "goto",     "if",       "implicit",
        "in",       "int",      "interface", "internal", "is",        "lock",     "long",     "namespace",
        "new",      "null",     "object",   "operator",  "out",       "override", "params",   "private",
        "protected", "public",  "readonly", "ref",       "return",    "sbyte",    "sealed",   "short",
        "sizeof",   "stackalloc", "static", "string",    "struct",    "switch",   "this",     "throw",
        "true",     "try",      "typeof",   "uint",      "ulong",     "unchecked", "unsafe",  "ushort",
        "using",    "virtual",  "void",     "volatile",  "while"};
    return keywords.count(s) > 0;
}

// Valid C# identifier text for `name`; keywords are escaped with '@'.
std::string identifier(const std::string& name) {
    bool ok = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0])) &&
              std::all_of(name.begin(), name.end(),
                          [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
    if (!ok) throw Error(kNameClash, "'" + name + "' is not a valid C# identifier");
    return isKeyword(name) ? "@" + name : name;
}

std::string renderType(const Term& t) {
    std::string out = identifier(t.name());
    if (t.arity() == 0) return out;
    out += '<';
    for (std::size_t i = 0; i < t.arity(); ++i) out += (i ? ", " : "") + renderType(t.child(i));
    return out + '>';
}

std::string renderHead(const ClassDecl& d, bool markVariance) {
    std::string out = identifier(d.name);
    if (d.params.empty()) return out;
    out += '<';
    for (std::size_t i = 0; i < d.params.size(); ++i) {
        if (i) out += ", ";
        if (markVariance && d.params[i].variance == Variance::Covariant) out += "out ";
        out += identifier(d.params[i].name);
    }
    return out + '>';
}

// "  public interface Head : S1, S2, ... {}" wrapped at kLineWidth.
std::string renderInterface(const std::string& head, const std::vector<std::string>& supers) {
    std::string line = "  public interface " + head;
    if (supers.empty()) return line + " {}\n";
    line += " :";
    for (std::size_t i = 0; i < supers.size(); ++i) {
        std::string item = " " + supers[i] + (i + 1 < supers.size() ? "," : " {}");
        const std::size_t lineStart = line.rfind('\n') == std::string::npos ? 0 : line.rfind('\n') + 1;
        if (line.size() - lineStart + item.size() > kLineWidth && line.back() == ',') {
            line.push_back('\n');
            line += "   ";
        }
        line += item;
    }
    return line + "\n";
}

std::string withDefault(const std::string& value, const std::string& fallback) {
    return value.empty() ? fallback : value;
}

}  // namespace

std::string GeneratedSource::fileText() const {
    return "namespace " + namespaceName + " {\n" + machineText + fluentText + "}\n";
}

std::string GeneratedSource::manifestJson() const {
    nlohmann::json j(manifest);
    return j.dump(2) + "\n";
}

GeneratedSource CSharpDialect::emitMachine(const ClassTable& table, const Term& bottom, const EmitterConfig& cfg) const {
    requireWellFormed(table);
    if (hasContravariance(table)) throw Error(kFragmentRefused, "C# machines are emitted for covariant tables only");
    checkGroundType(table, bottom);

    GeneratedSource out;
    out.namespaceName = identifier(withDefault(cfg.namespaceName, withDefault(cfg.entryName, "Machine") + "API"));
    const std::string bottomName = identifier(cfg.bottomName);

    // C# tells generic declarations apart by arity, so (name, arity) must be unique.
    std::set<std::pair<std::string, std::size_t>> declared;
    auto declare = [&](const std::string& name, std::size_t arity) {
        if (!declared.emplace(name, arity).second)
            throw Error(kNameClash, "two generated declarations named '" + name + "' with arity " + std::to_string(arity));
    };

    for (const ClassDecl& d : table.decls()) {
        if (d.name == cfg.bottomName && d.params.empty() && d.supertypes.empty()) continue;
        declare(d.name, d.rank());
        std::vector<std::string> supers;
        for (const Term& s : d.supertypes) supers.push_back(renderType(s));
        out.machineText += renderInterface(renderHead(d, true), supers);
        out.manifest.emplace("class:" + d.name, renderHead(d, true));
    }
    declare(cfg.bottomName, 0);
    out.machineText += renderInterface(bottomName, {});
    out.manifest.emplace("bottom", bottomName);
    if (!cfg.entryName.empty()) {
        declare(cfg.entryName, 0);
        out.machineText += renderInterface(identifier(cfg.entryName), {renderType(bottom)});
        out.manifest.emplace("entry", identifier(cfg.entryName));
    }
    return out;
}

void CSharpDialect::emitFluentApi(const StringCfg& g, const EmitterConfig& cfg, GeneratedSource& out) const {
    const std::string entry = identifier(withDefault(cfg.entryName, g.start));
    const std::string token = identifier(withDefault(cfg.tokenEnumName, withDefault(cfg.entryName, g.start) + "Token"));
    const std::string bottomName = identifier(cfg.bottomName);
    const std::string list = std::string(kList) + "<" + token + ">";
    const std::string x(kChainParam);

    std::string& f = out.fluentText;
    f += "  namespace FluentAPI {\n";
    f += "    public class Wrapper<T> {\n";
    f += "      public readonly " + list + " values =\n";
    f += "        new " + list + "();\n";
    f += "      public Wrapper<T> AddRange<S>(Wrapper<S> other) {\n";
    f += "        this.values.AddRange(other.values);\n";
    f += "        return this;\n";
    f += "      }\n";
    f += "      public Wrapper<T> Add(" + token + " value) {\n";
    f += "        values.Add(value);\n";
    f += "        return this;\n";
    f += "      }\n";
    f += "      public " + list + " Done<API>() where API : T {\n";
    f += "        return values;\n";
    f += "      }\n";
    f += "    }\n";
    f += "    public enum " + token + " {";
    for (const std::string& t : g.terminals) f += " " + identifier(t) + ",";
    f += " }\n";
    f += "    public static class Start {\n";
    for (const std::string& raw : g.terminals) {
        const std::string t = identifier(raw);
        const std::string first = "Wrapper<" + t + "<" + bottomName + ">>";
        const std::string next = "Wrapper<" + t + "<" + x + ">>";
        f += "      public static " + first + " " + t + "() {\n";
        f += "        return new " + first + "().Add(" + token + "." + t + "); }\n";
        f += "      public static " + next + " " + t + "<" + x + ">(this Wrapper<" + x + "> _wrapper) {\n";
        f += "        return new " + next + "().AddRange(_wrapper).Add(" + token + "." + t + "); }\n";
        out.manifest.emplace("token:" + raw, token + "." + t);
        out.manifest.emplace("method:" + raw, "Start." + t);
    }
    if (acceptsEmpty(g)) {
        f += "      public static " + list + " Done<" + entry + ">() {\n";
        f += "        return new " + list + "(); }\n";
        out.manifest.emplace("empty", "Start.Done<" + entry + ">");
    }
    f += "    }\n";
    f += "  }\n";
}

GeneratedSource emitSubtypingMachineSource(const ClassTable& table, const Term& bottom, const EmitterConfig& cfg) {
    return CSharpDialect{}.emitMachine(table, bottom, cfg);
}

GeneratedSource emitFluentApiSource(const StringCfg& g, const ClassTable& table, const Term& bottom,
                                    const EmitterConfig& cfg) {
    CSharpDialect dialect;
    GeneratedSource out = dialect.emitMachine(table, bottom, cfg);
    dialect.emitFluentApi(g, cfg, out);
    return out;
}

GeneratedSource generateApi(const StringCfg& g, EmitterConfig cfg) {
    if (cfg.entryName.empty()) cfg.entryName = g.start;
    MachineOptions options;
    options.endMarker = cfg.bottomName;
    SubtypingMachine machine = buildSubtypingMachine(g, options);
    if (cfg.fluent) return emitFluentApiSource(g, machine.encoded.table, machine.encoded.bottom, cfg);
    return emitSubtypingMachineSource(machine.encoded.table, machine.encoded.bottom, cfg);
}

}  // namespace treetop
