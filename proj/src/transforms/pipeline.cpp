#include <algorithm>

#include "treetop/error.hpp"
#include "treetop/transforms.hpp"

namespace treetop {

SubtypingMachine buildSubtypingMachine(const StringCfg& g, const MachineOptions& options) {
    SubtypingMachine m;
    m.source = g;
    m.endMarker = options.endMarker;
    m.gnf = cfgToGnf(reverseCfg(g));
    m.emptyWord = m.gnf.emptyWord;
    m.monadic = cfgToMonadicCftg(m.gnf, options.endMarker, options.param);
    Cftg encodable = m.monadic;
    encodable.emptyTree.reset();
    GnfEncodingOptions enc;
    enc.paramBase = options.param;
    m.encoded = gnfCftgToClassTable(encodable, enc);
    return m;
}

Term chainType(std::span<const std::string> tokens, std::string_view endMarker) {
    Term t = Term::leaf(endMarker);
    for (const std::string& tok : tokens) t = Term::node(tok, {t});
    return t;
}

MachineRecognizer::MachineRecognizer(SubtypingMachine machine)
    : machine_(std::move(machine)), subtyper_(machine_.encoded.table) {}

Verdict MachineRecognizer::decide(std::span<const std::string> tokens, const DecideOptions& options) const {
    if (tokens.empty()) {
        if (!machine_.emptyWord) return Fails{};
        return Holds{};
    }
    for (const std::string& tok : tokens)
        if (!machine_.gnf.isTerminal(tok)) return Fails{};
    SubtypeQuery q{machine_.encoded.bottom, chainType(tokens, machine_.endMarker), Relation::Sub,
                   machine_.encoded.split};
    return subtyper_.decide(q, options);
}

bool MachineRecognizer::accepts(std::span<const std::string> tokens) const {
    DecideOptions options;
    options.withTrace = false;
    return holds(decide(tokens, options));
}

}  // namespace treetop
