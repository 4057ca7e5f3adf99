#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "treetop/class_table.hpp"
#include "treetop/grammars.hpp"
#include "treetop/transforms.hpp"

namespace treetop {

struct EmitterConfig {
    std::string namespaceName;  // defaults to entryName + "API"
    bool fluent = false;
    std::string bottomName = "BOTTOM";
    std::string entryName;      // grammar start; no entry interface when empty
    std::string tokenEnumName;  // defaults to entryName + "Token"
};

struct GeneratedSource {
    std::string namespaceName;
    std::string machineText;  // interface declarations, one per class, plus bottom and entry
    std::string fluentText;   // nested FluentAPI namespace, empty unless requested
    // Construct -> emitted declaration, e.g. "class:Canvas2" -> "Canvas2<_x>".
    std::map<std::string, std::string> manifest;

    std::string fileText() const;
    std::string manifestJson() const;
};

// A target language for generated machines.
class SourceDialect {
public:
    virtual ~SourceDialect() = default;
    virtual std::string fileExtension() const = 0;
    virtual GeneratedSource emitMachine(const ClassTable& table, const Term& bottom, const EmitterConfig& cfg) const = 0;
    // Adds the fluent wrapper for grammar `g` to an emitted machine.
    virtual void emitFluentApi(const StringCfg& g, const EmitterConfig& cfg, GeneratedSource& out) const = 0;
};

// The C# dialect of the Treetop listings.
class CSharpDialect final : public SourceDialect {
public:
    std::string fileExtension() const override { return "cs"; }
    GeneratedSource emitMachine(const ClassTable& table, const Term& bottom, const EmitterConfig& cfg) const override;
    void emitFluentApi(const StringCfg& g, const EmitterConfig& cfg, GeneratedSource& out) const override;
};

// Throws Error(kFragmentRefused) for contravariant tables and
// Error(kNameClash) for colliding or invalid identifiers.
GeneratedSource emitSubtypingMachineSource(const ClassTable& table, const Term& bottom, const EmitterConfig& cfg);
GeneratedSource emitFluentApiSource(const StringCfg& g, const ClassTable& table, const Term& bottom,
                                    const EmitterConfig& cfg);

// Full pipeline from a string grammar: machine, plus the fluent API when
// cfg.fluent. Empty entryName defaults to the grammar's start.
GeneratedSource generateApi(const StringCfg& g, EmitterConfig cfg);

// Canonical form of generated (or hand-written) C# API text for structural
// comparison: interfaces whose declarations carry type parameters and
// supertypes are renamed V1, V2, ... in order of appearance, supertype lists
// become sorted multisets, and the fluent method signatures are collected
// with whitespace collapsed. The result is one sorted line per item.
std::string normalizeApiSource(std::string_view source);

}  // namespace treetop
