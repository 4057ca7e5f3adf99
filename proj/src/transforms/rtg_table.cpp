#include <algorithm>

#include "treetop/error.hpp"
#include "treetop/transforms.hpp"

namespace treetop {

namespace {

std::vector<TypeParam> covariantParams(std::size_t rank, const std::string& base) {
    std::vector<TypeParam> params;
    for (std::size_t i = 0; i < rank; ++i)
        params.push_back({rank == 1 ? base : base + std::to_string(i + 1), Variance::Covariant});
    return params;
}

}  // namespace

EncodedTable rtgToClassTable(const RegularTreeGrammar& g) {
    validateRtg(g);
    for (const RankedSymbol& t : g.terminals)
        if (std::find(g.variables.begin(), g.variables.end(), t.name) != g.variables.end())
            throw Error(kNameClash, "'" + t.name + "' is both a terminal and a variable");

    EncodedTable out;
    for (const RankedSymbol& t : g.terminals) {
        out.table.add({t.name, covariantParams(t.rank, "x"), {}});
        out.split.sup.insert(t.name);
    }
    for (const std::string& v : g.variables) {
        ClassDecl decl{v, {}, {}};
        for (const RtgProduction& p : g.productions)
            if (p.lhs == v && std::find(decl.supertypes.begin(), decl.supertypes.end(), p.rhs) == decl.supertypes.end())
                decl.supertypes.push_back(p.rhs);
        out.table.add(std::move(decl));
    }
    out.bottom = Term::leaf(g.start);
    return out;
}

}  // namespace treetop
