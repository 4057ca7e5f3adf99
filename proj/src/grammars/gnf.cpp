#include <algorithm>
#include <map>

#include "treetop/error.hpp"
#include "treetop/grammars.hpp"

namespace treetop {

namespace {

using Rhs = std::vector<std::string>;

// Productions grouped by left-hand side, duplicates dropped, first
// occurrence order kept.
class RuleSet {
public:
    std::vector<std::string> order;
    std::map<std::string, std::vector<Rhs>> rules;

    bool isVariable(const std::string& s) const { return rules.count(s) > 0; }

    void declare(const std::string& v) {
        if (rules.emplace(v, std::vector<Rhs>{}).second) order.push_back(v);
    }

    void add(const std::string& lhs, Rhs rhs) {
        auto& list = rules[lhs];
        if (std::find(list.begin(), list.end(), rhs) == list.end()) list.push_back(std::move(rhs));
    }

    std::string fresh(const std::string& base, const std::vector<std::string>& terminals) const {
        return freshName(base, [&](std::string_view n) {
            return rules.count(std::string(n)) > 0 ||
                   std::find(terminals.begin(), terminals.end(), n) != terminals.end();
        });
    }
};

// Every way of dropping a subset of nullable occurrences, keeping only
// non-empty results. Mask bit i drops the i-th nullable occurrence; masks
// run from all dropped down to none dropped.
std::vector<Rhs> epsilonVariants(const Rhs& rhs, const std::set<std::string>& nullable) {
    std::vector<std::size_t> spots;
    for (std::size_t i = 0; i < rhs.size(); ++i)
        if (nullable.count(rhs[i])) spots.push_back(i);
    if (spots.size() > 20) throw Error(kOverflow, "too many nullable symbols in one production");
    std::vector<Rhs> out;
    for (std::size_t mask = (std::size_t{1} << spots.size()); mask-- > 0;) {
        Rhs variant;
        for (std::size_t i = 0, k = 0; i < rhs.size(); ++i) {
            bool drop = k < spots.size() && spots[k] == i && ((mask >> k) & 1);
            if (k < spots.size() && spots[k] == i) ++k;
            if (!drop) variant.push_back(rhs[i]);
        }
        if (!variant.empty() && std::find(out.begin(), out.end(), variant) == out.end()) out.push_back(variant);
    }
    return out;
}

// Replaces a leading `head` by each of its right-hand sides.
std::vector<Rhs> expandHead(const std::vector<Rhs>& list, const std::string& head, const std::vector<Rhs>& headRules) {
    std::vector<Rhs> out;
    auto push = [&](Rhs r) {
        if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(std::move(r));
    };
    for (const Rhs& r : list) {
        if (r.front() != head) {
            push(r);
            continue;
        }
        for (const Rhs& h : headRules) {
            Rhs joined = h;
            joined.insert(joined.end(), r.begin() + 1, r.end());
            push(std::move(joined));
        }
    }
    return out;
}

void dropSelfUnits(RuleSet& rs) {
    for (auto& [lhs, list] : rs.rules)
        std::erase_if(list, [&](const Rhs& r) { return r.size() == 1 && r.front() == lhs; });
}

// Keeps variables that derive some terminal word and are reachable from the start.
void dropUseless(RuleSet& rs, const std::string& start) {
    std::set<std::string> productive;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& [lhs, list] : rs.rules) {
            if (productive.count(lhs)) continue;
            for (const Rhs& r : list) {
                bool ok = std::all_of(r.begin(), r.end(), [&](const std::string& s) {
                    return !rs.isVariable(s) || productive.count(s) > 0;
                });
                if (ok) {
                    productive.insert(lhs);
                    changed = true;
                    break;
                }
            }
        }
    }
    for (auto& [lhs, list] : rs.rules)
        std::erase_if(list, [&](const Rhs& r) {
            return std::any_of(r.begin(), r.end(), [&](const std::string& s) {
                return rs.isVariable(s) && !productive.count(s);
            });
        });

    std::set<std::string> reachable{start};
    std::vector<std::string> work{start};
    while (!work.empty()) {
        std::string v = work.back();
        work.pop_back();
        for (const Rhs& r : rs.rules[v])
            for (const std::string& s : r)
                if (rs.isVariable(s) && reachable.insert(s).second) work.push_back(s);
    }
    std::vector<std::string> kept;
    for (const std::string& v : rs.order) {
        if (reachable.count(v)) kept.push_back(v);
        else rs.rules.erase(v);
    }
    rs.order = std::move(kept);
}

}  // namespace

StringCfg cfgToGnf(const StringCfg& g) {
    const bool emptyWord = acceptsEmpty(g);
    RuleSet rs;
    for (const std::string& v : g.variables) rs.declare(v);
    for (const CfgProduction& p : g.productions) rs.add(p.lhs, p.rhs);

    // A start symbol that occurs on a right-hand side gets a fresh start.
    std::string start = g.start;
    bool startOnRight = std::any_of(g.productions.begin(), g.productions.end(), [&](const CfgProduction& p) {
        return std::find(p.rhs.begin(), p.rhs.end(), g.start) != p.rhs.end();
    });
    if (startOnRight) {
        std::string fresh = rs.fresh(g.start, g.terminals);
        rs.order.insert(rs.order.begin(), fresh);
        rs.rules[fresh] = {Rhs{g.start}};
        start = fresh;
    }

    // Epsilon elimination.
    StringCfg flat;
    for (const std::string& v : rs.order)
        for (const Rhs& r : rs.rules[v]) flat.productions.push_back({v, r});
    std::set<std::string> nullable = nullableVariables(flat);
    for (const std::string& v : rs.order) {
        std::vector<Rhs> next;
        for (const Rhs& r : rs.rules[v])
            for (Rhs& variant : epsilonVariants(r, nullable))
                if (std::find(next.begin(), next.end(), variant) == next.end()) next.push_back(std::move(variant));
        rs.rules[v] = std::move(next);
    }
    dropSelfUnits(rs);
    dropUseless(rs, start);

    // Left recursion, in declaration order. Afterwards each A_i starts with a
    // terminal or with some A_j, j > i; tails start with anything but a tail.
    const std::vector<std::string> ordered = rs.order;
    std::vector<std::string> tails;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const std::string& ai = ordered[i];
        for (std::size_t j = 0; j < i; ++j) rs.rules[ai] = expandHead(rs.rules[ai], ordered[j], rs.rules[ordered[j]]);
        dropSelfUnits(rs);

        std::vector<Rhs> alphas, betas;
        for (const Rhs& r : rs.rules[ai]) {
            if (r.front() == ai) alphas.emplace_back(r.begin() + 1, r.end());
            else betas.push_back(r);
        }
        if (alphas.empty()) continue;

        std::string tail = rs.fresh(ai, g.terminals);
        rs.declare(tail);
        tails.push_back(tail);
        std::vector<Rhs> newRules;
        for (const Rhs& b : betas) {
            newRules.push_back(b);
            Rhs withTail = b;
            withTail.push_back(tail);
            newRules.push_back(std::move(withTail));
        }
        rs.rules[ai] = std::move(newRules);
        for (const Rhs& a : alphas) {
            rs.add(tail, a);
            Rhs withTail = a;
            withTail.push_back(tail);
            rs.add(tail, std::move(withTail));
        }
    }

    // Head substitution, last variable first, then the tails.
    for (std::size_t i = ordered.size(); i-- > 0;)
        for (std::size_t j = ordered.size(); j-- > i + 1;)
            rs.rules[ordered[i]] = expandHead(rs.rules[ordered[i]], ordered[j], rs.rules[ordered[j]]);
    for (std::size_t k = 0; k < tails.size(); ++k) {
        auto& rules = rs.rules[tails[k]];
        for (const std::string& v : ordered) rules = expandHead(rules, v, rs.rules[v]);
        for (std::size_t e = 0; e < k; ++e) rules = expandHead(rules, tails[e], rs.rules[tails[e]]);
    }
    dropUseless(rs, start);

    StringCfg out;
    out.start = start;
    out.variables = rs.order;
    out.terminals = g.terminals;
    out.emptyWord = emptyWord;
    for (const std::string& v : rs.order)
        for (const Rhs& r : rs.rules[v]) out.productions.push_back({v, r});
    if (!isCfgGnf(out)) throw Error(kNotGnf, "internal: conversion left a variable-headed production");
    return out;
}

}  // namespace treetop
