#include <map>

#include "treetop/class_table.hpp"
#include "treetop/error.hpp"

namespace treetop {

namespace {

class ClosureBuilder {
public:
    explicit ClosureBuilder(const ClassTable& table) : table_(table) {}

    const std::vector<Inheritance>& strict(const std::string& cls) {
        if (auto it = done_.find(cls); it != done_.end()) return it->second;
        if (!active_.insert(cls).second)
            throw Error(kIllFormedTable, "inheritance cycle through '" + cls + "'");

        const ClassDecl& decl = table_.at(cls);
        std::vector<Inheritance> out;
        auto push = [&](Inheritance inh) {
            for (const Inheritance& e : out)
                if (e.target == inh.target) return;
            out.push_back(std::move(inh));
        };
        for (std::size_t i = 0; i < decl.supertypes.size(); ++i) {
            const Term& sup = decl.supertypes[i];
            if (sup.isParam()) throw Error(kIllFormedTable, "bare parameter supertype in '" + cls + "'");
            InheritanceStep step{cls, i};
            push({sup, {step}});
            const ClassDecl& parent = table_.at(sup.name());
            Substitution s = parent.bind(sup);
            for (const Inheritance& up : strict(parent.name)) {
                Inheritance inh{applySubst(up.target, s), {step}};
                inh.path.insert(inh.path.end(), up.path.begin(), up.path.end());
                push(std::move(inh));
            }
        }
        active_.erase(cls);
        return done_.emplace(cls, std::move(out)).first->second;
    }

private:
    const ClassTable& table_;
    std::map<std::string, std::vector<Inheritance>> done_;
    std::set<std::string> active_;
};

}  // namespace

std::vector<Inheritance> inheritanceClosure(const ClassTable& table, std::string_view cls,
                                            bool reflexive) {
    const ClassDecl& decl = table.at(cls);
    ClosureBuilder builder(table);
    std::vector<Inheritance> out;
    if (reflexive) out.push_back({decl.selfPattern(), {}});
    const auto& strict = builder.strict(decl.name);
    out.insert(out.end(), strict.begin(), strict.end());
    return out;
}

std::map<std::string, std::vector<Inheritance>> allInheritanceClosures(const ClassTable& table,
                                                                       bool reflexive) {
    ClosureBuilder builder(table);
    std::map<std::string, std::vector<Inheritance>> out;
    for (const ClassDecl& d : table.decls()) {
        std::vector<Inheritance> entries;
        if (reflexive) entries.push_back({d.selfPattern(), {}});
        const auto& strict = builder.strict(d.name);
        entries.insert(entries.end(), strict.begin(), strict.end());
        out.emplace(d.name, std::move(entries));
    }
    return out;
}

std::set<std::string> superClassNames(const ClassTable& table, std::string_view cls) {
    std::set<std::string> out;
    std::vector<std::string> work{std::string(cls)};
    while (!work.empty()) {
        std::string c = std::move(work.back());
        work.pop_back();
        for (const Term& s : table.at(c).supertypes)
            if (!s.isParam() && out.insert(s.name()).second) work.push_back(s.name());
    }
    return out;
}

}  // namespace treetop
