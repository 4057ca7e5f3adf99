#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "treetop/subtyping.hpp"

namespace treetop::detail {

struct JudgementKey {
    const void* left;
    const void* right;
    Relation rel;

    friend bool operator==(const JudgementKey&, const JudgementKey&) = default;
};

struct JudgementKeyHash {
    std::size_t operator()(const JudgementKey& k) const noexcept {
        std::size_t h = std::hash<const void*>{}(k.left);
        h ^= std::hash<const void*>{}(k.right) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h ^ static_cast<std::size_t>(k.rel);
    }
};

inline JudgementKey keyOf(const Term& l, const Term& r, Relation rel) { return {l.id(), r.id(), rel}; }

// Per-table facts shared by the deciders: reflexive-transitive inheritance
// per class and which class names each class can reach.
class TableFacts {
public:
    explicit TableFacts(const ClassTable& table)
        : table_(table), closures_(allInheritanceClosures(table, true)) {
        for (const ClassDecl& d : table.decls()) {
            auto names = superClassNames(table, d.name);
            names.insert(d.name);
            reach_.emplace(d.name, std::move(names));
        }
    }

    const ClassTable& table() const { return table_; }
    const std::vector<Inheritance>& closure(const std::string& cls) const { return closures_.at(cls); }
    bool reaches(const std::string& from, const std::string& to) const { return reach_.at(from).count(to) > 0; }

private:
    const ClassTable& table_;
    std::map<std::string, std::vector<Inheritance>> closures_;
    std::map<std::string, std::set<std::string>> reach_;
};

Verdict runNonContravariant(const TableFacts& facts, const Judgement& goal, const DecideOptions& options);
Verdict runNonExpansive(const TableFacts& facts, const Judgement& goal, const DecideOptions& options);

}  // namespace treetop::detail
