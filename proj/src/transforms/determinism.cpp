#include "treetop/transforms.hpp"

namespace treetop {

DeterminismReport checkDeterminismCorrespondence(const RegularTreeGrammar& g) {
    return {isDeterministicGnf(g), !hasMultipleInstantiation(rtgToClassTable(g).table)};
}

DeterminismReport checkDeterminismCorrespondence(const Cftg& gnf) {
    return {isDeterministicGnf(gnf), !hasMultipleInstantiation(gnfCftgToClassTable(gnf).table)};
}

DeterminismReport checkDeterminismCorrespondence(const ClassTable& table, const Term& bottom,
                                                 const std::set<std::string>& sigmaTop) {
    const bool single = !hasMultipleInstantiation(table);
    if (!hasContravariance(table)) return {isDeterministicGnf(classTableToGnfCftg(table, bottom, sigmaTop)), single};
    return {isDeterministicGnf(classTableToRtg(table, bottom, sigmaTop)), single};
}

}  // namespace treetop
