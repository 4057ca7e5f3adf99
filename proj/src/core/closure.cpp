#include <algorithm>
#include <deque>
#include <unordered_map>

#include "treetop/class_table.hpp"

namespace treetop {

namespace {

std::vector<Term> witnessChain(const Term& last, const std::unordered_map<Term, Term>& parent) {
    std::vector<Term> path{last};
    for (auto it = parent.find(last); it != parent.end() && it->second.valid(); it = parent.find(it->second))
        path.push_back(it->second);
    std::reverse(path.begin(), path.end());

    auto growing = [&](bool sameRoot) {
        std::vector<Term> chain;
        for (const Term& t : path) {
            if (sameRoot && t.name() != path.front().name()) continue;
            if (chain.empty() || t.size() > chain.back().size()) chain.push_back(t);
        }
        return chain;
    };
    std::vector<Term> chain = growing(true);
    if (chain.size() < 2) chain = growing(false);
    return chain;
}

}  // namespace

ClosureResult closure(const ClassTable& table, std::span<const Term> seeds, std::size_t budget) {
    std::vector<Term> found;
    std::unordered_map<Term, Term> parent;
    std::deque<Term> queue;

    auto discover = [&](const Term& t, const Term& from) -> bool {
        if (parent.count(t)) return true;
        if (found.size() >= budget) {
            parent.emplace(t, from);
            return false;
        }
        parent.emplace(t, from);
        found.push_back(t);
        queue.push_back(t);
        return true;
    };

    for (const Term& s : seeds) {
        checkGroundType(table, s);
        if (!discover(s, Term())) return BudgetExceeded{witnessChain(s, parent)};
    }
    while (!queue.empty()) {
        Term t = queue.front();
        queue.pop_front();
        for (const Term& c : t.children())
            if (!discover(c, t)) return BudgetExceeded{witnessChain(c, parent)};
        for (const Term& s : superTypesOf(table, t))
            if (!discover(s, t)) return BudgetExceeded{witnessChain(s, parent)};
    }
    return ClosedSet{std::move(found)};
}

}  // namespace treetop
