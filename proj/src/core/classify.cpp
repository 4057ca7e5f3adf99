#include <deque>
#include <map>
#include <set>
#include <unordered_set>

#include "treetop/class_table.hpp"
#include "treetop/error.hpp"

namespace treetop {

bool hasContravariance(const ClassTable& table) {
    for (const ClassDecl& d : table.decls())
        for (const TypeParam& p : d.params)
            if (p.variance == Variance::Contravariant) return true;
    return false;
}

bool hasMultipleInstantiation(const ClassTable& table) {
    for (const ClassDecl& d : table.decls()) {
        std::set<std::string> roots;
        for (const Inheritance& inh : inheritanceClosure(table, d.name, false))
            if (!roots.insert(inh.target.name()).second) return true;
    }
    return false;
}

namespace {

using ParamNode = std::pair<std::string, std::size_t>;

struct DependencyGraph {
    std::map<ParamNode, std::set<ParamNode>> edges;
    std::vector<std::pair<ParamNode, ParamNode>> expansiveEdges;

    bool reaches(const ParamNode& from, const ParamNode& to) const {
        std::set<ParamNode> seen{from};
        std::deque<ParamNode> work{from};
        while (!work.empty()) {
            ParamNode n = work.front();
            work.pop_front();
            if (n == to) return true;
            auto it = edges.find(n);
            if (it == edges.end()) continue;
            for (const ParamNode& m : it->second)
                if (seen.insert(m).second) work.push_back(m);
        }
        return false;
    }
};

// Every argument position of every node inside a supertype pattern links
// the declaring class's parameters that occur there to the argument's
// parameter slot: directly (non-expansive) or nested deeper (expansive).
DependencyGraph dependencyGraph(const ClassTable& table) {
    DependencyGraph g;
    for (const ClassDecl& d : table.decls()) {
        std::vector<Term> work(d.supertypes.begin(), d.supertypes.end());
        while (!work.empty()) {
            Term t = work.back();
            work.pop_back();
            if (t.isParam()) continue;
            for (std::size_t j = 0; j < t.arity(); ++j) {
                const Term& arg = t.child(j);
                work.push_back(arg);
                for (std::size_t i = 0; i < d.rank(); ++i) {
                    const std::string& x = d.params[i].name;
                    ParamNode from{d.name, i}, to{t.name(), j};
                    if (arg.isParam() && arg.name() == x) {
                        g.edges[from].insert(to);
                    } else if (containsParam(arg, x)) {
                        g.edges[from].insert(to);
                        g.expansiveEdges.emplace_back(from, to);
                    }
                }
            }
        }
    }
    return g;
}

}  // namespace

bool isExpansive(const ClassTable& table) {
    DependencyGraph g = dependencyGraph(table);
    for (const auto& [from, to] : g.expansiveEdges)
        if (g.reaches(to, from)) return true;
    return false;
}

bool closureOutgrows(const ClassTable& table, std::size_t heightLimit, std::size_t budget) {
    // '#' is an opaque leaf standing for an arbitrary argument; it is never
    // looked up in the table.
    const Term hole = Term::leaf("#");
    std::unordered_set<Term> seen;
    std::deque<Term> queue;
    for (const ClassDecl& d : table.decls()) {
        Term seed = Term::node(d.name, std::vector<Term>(d.rank(), hole));
        if (seen.insert(seed).second) queue.push_back(seed);
    }
    while (!queue.empty()) {
        Term t = queue.front();
        queue.pop_front();
        if (t.height() > heightLimit || seen.size() > budget) return true;
        if (t == hole) continue;
        std::vector<Term> next(t.children().begin(), t.children().end());
        for (const Term& s : superTypesOf(table, t)) next.push_back(s);
        for (const Term& n : next)
            if (seen.insert(n).second) queue.push_back(n);
    }
    return false;
}

FeatureSet classify(const ClassTable& table) {
    requireWellFormed(table);
    FeatureSet f;
    f.contravariance = hasContravariance(table);
    f.expansive = isExpansive(table);
    f.multipleInstantiation = hasMultipleInstantiation(table);
    return f;
}

}  // namespace treetop
