#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "treetop/class_table.hpp"
#include "treetop/error.hpp"

namespace treetop {

namespace {

// Structural problems in one supertype pattern; returns false if the pattern
// cannot be inspected further (so variance checking is skipped).
bool checkStructure(const ClassTable& table, const ClassDecl& decl, const Term& sup,
                    std::vector<Diagnostic>& out) {
    bool ok = true;
    std::function<void(const Term&)> walk = [&](const Term& t) {
        if (t.isParam()) {
            bool declared = std::any_of(decl.params.begin(), decl.params.end(),
                                        [&](const TypeParam& p) { return p.name == t.name(); });
            if (!declared) {
                out.push_back({"WF-PARAM", decl.name,
                               "supertype " + sup.str() + " uses undeclared parameter '" + t.name() + "'"});
                ok = false;
            }
            return;
        }
        const ClassDecl* target = table.find(t.name());
        if (!target) {
            out.push_back({"WF-UNDECLARED", decl.name,
                           "supertype " + sup.str() + " mentions undeclared class '" + t.name() + "'"});
            ok = false;
        } else if (target->rank() != t.arity()) {
            out.push_back({"WF-ARITY", decl.name,
                           "supertype " + sup.str() + " applies '" + t.name() + "' to " +
                               std::to_string(t.arity()) + " arguments, rank is " +
                               std::to_string(target->rank())});
            ok = false;
        }
        for (const Term& c : t.children()) walk(c);
    };
    walk(sup);
    return ok;
}

const TypeParam* findParam(const ClassDecl& decl, const std::string& name) {
    for (const TypeParam& p : decl.params)
        if (p.name == name) return &p;
    return nullptr;
}

// A parameter may occur where its (possibly flipped) variance is invariant or
// covariant. Invariant argument positions demand validity under both
// polarities.
bool validVariance(const ClassTable& table, const ClassDecl& decl, const Term& t, bool flipped) {
    if (t.isParam()) {
        Variance v = findParam(decl, t.name())->variance;
        if (flipped) v = flip(v);
        return v != Variance::Contravariant;
    }
    const ClassDecl& target = table.at(t.name());
    for (std::size_t i = 0; i < t.arity(); ++i) {
        Variance vi = target.varianceAt(i);
        if (vi != Variance::Contravariant && !validVariance(table, decl, t.child(i), flipped)) return false;
        if (vi != Variance::Covariant && !validVariance(table, decl, t.child(i), !flipped)) return false;
    }
    return true;
}

class CycleFinder {
public:
    explicit CycleFinder(const ClassTable& table) : table_(table) {
        for (const ClassDecl& d : table.decls()) {
            auto& edges = edges_[d.name];
            for (const Term& s : d.supertypes)
                if (!s.isParam() && table.contains(s.name())) edges.push_back(s.name());
        }
    }

    std::vector<std::vector<std::string>> cycles() {
        for (const ClassDecl& d : table_.decls())
            if (!indexOf_.count(d.name)) strongConnect(d.name);
        return cycles_;
    }

private:
    void strongConnect(const std::string& v) {
        indexOf_[v] = low_[v] = counter_++;
        stack_.push_back(v);
        onStack_.insert(v);
        for (const std::string& w : edges_[v]) {
            if (!indexOf_.count(w)) {
                strongConnect(w);
                low_[v] = std::min(low_[v], low_[w]);
            } else if (onStack_.count(w)) {
                low_[v] = std::min(low_[v], indexOf_[w]);
            }
        }
        if (low_[v] != indexOf_[v]) return;
        std::vector<std::string> scc;
        while (true) {
            std::string w = stack_.back();
            stack_.pop_back();
            onStack_.erase(w);
            scc.push_back(w);
            if (w == v) break;
        }
        const auto& selfEdges = edges_[v];
        bool selfLoop = std::find(selfEdges.begin(), selfEdges.end(), v) != selfEdges.end();
        if (scc.size() > 1 || selfLoop) cycles_.push_back(std::move(scc));
    }

    const ClassTable& table_;
    std::map<std::string, std::vector<std::string>> edges_;
    std::map<std::string, std::size_t> indexOf_, low_;
    std::vector<std::string> stack_;
    std::set<std::string> onStack_;
    std::size_t counter_ = 0;
    std::vector<std::vector<std::string>> cycles_;
};

}  // namespace

std::vector<Diagnostic> checkWellFormed(const ClassTable& table) {
    std::vector<Diagnostic> out;
    for (const ClassDecl& d : table.decls()) {
        std::set<std::string> seen;
        for (const TypeParam& p : d.params)
            if (!seen.insert(p.name).second)
                out.push_back({"WF-PARAM", d.name, "parameter '" + p.name + "' declared twice"});
        for (const Term& sup : d.supertypes) {
            if (sup.isParam()) {
                out.push_back({"WF-MIXIN", d.name, "supertype '" + sup.name() + "' is a bare parameter"});
                continue;
            }
            if (!checkStructure(table, d, sup, out)) continue;
            if (!validVariance(table, d, sup, false))
                out.push_back({"WF-VARIANCE", d.name,
                               "supertype " + sup.str() + " uses a parameter against its declared variance"});
        }
    }

    std::map<std::string, std::size_t> order;
    for (std::size_t i = 0; i < table.size(); ++i) order[table.decls()[i].name] = i;
    for (auto& scc : CycleFinder(table).cycles()) {
        std::sort(scc.begin(), scc.end(),
                  [&](const std::string& a, const std::string& b) { return order[a] < order[b]; });
        std::string members;
        for (const std::string& n : scc) members += (members.empty() ? "" : ", ") + n;
        out.push_back({"WF-CYCLE", scc.front(), "inheritance cycle through " + members});
    }
    return out;
}

void requireWellFormed(const ClassTable& table) {
    auto diags = checkWellFormed(table);
    if (diags.empty()) return;
    std::string msg = "class table is not well formed:";
    for (const Diagnostic& d : diags) msg += "\n  " + d.code + " " + d.className + ": " + d.message;
    throw Error(kIllFormedTable, msg);
}

}  // namespace treetop
