#include "json.hpp"
#include "treetop/error.hpp"
#include "treetop/subtyping.hpp"

namespace treetop {

const char* relationSymbol(Relation r) {
    switch (r) {
        case Relation::Sub: return "<:";
        case Relation::Eq: return "=";
        case Relation::Sup: return ":>";
    }
    return "?";
}

Relation relationFromSymbol(std::string_view s) {
    if (s == "<:") return Relation::Sub;
    if (s == "=") return Relation::Eq;
    if (s == ":>") return Relation::Sup;
    throw Error(kParse, "unknown relation '" + std::string(s) + "'");
}

Relation relationFor(Variance v) {
    switch (v) {
        case Variance::Covariant: return Relation::Sub;
        case Variance::Invariant: return Relation::Eq;
        case Variance::Contravariant: return Relation::Sup;
    }
    return Relation::Eq;
}

Relation mirror(Relation r) {
    if (r == Relation::Sub) return Relation::Sup;
    if (r == Relation::Sup) return Relation::Sub;
    return r;
}

std::string Judgement::str() const {
    return left.str() + " " + relationSymbol(rel) + " " + right.str();
}

SubtypeQuery parseQuery(std::string_view text) {
    for (std::string_view op : {"<:", ":>", "="}) {
        auto pos = text.find(op);
        if (pos == std::string_view::npos) continue;
        SubtypeQuery q;
        q.left = parseTerm(text.substr(0, pos));
        q.right = parseTerm(text.substr(pos + op.size()));
        q.rel = relationFromSymbol(op);
        return q;
    }
    throw Error(kParse, "query '" + std::string(text) + "' needs one of <:, =, :>");
}

std::size_t ProofTrace::size() const {
    std::size_t n = 1;
    for (const ProofTrace& p : premises) n += p.size();
    return n;
}

const char* ruleName(ProofTrace::Rule r) {
    switch (r) {
        case ProofTrace::Rule::Refl: return "Refl";
        case ProofTrace::Rule::Var: return "Var";
        case ProofTrace::Rule::Super: return "Super";
        case ProofTrace::Rule::Mirror: return "Mirror";
    }
    return "?";
}

namespace {

bool validStep(const ClassTable& table, const ProofTrace& node) {
    const Judgement& g = node.goal;
    if (!g.left.valid() || !g.right.valid() || g.left.isParam() || g.right.isParam()) return false;
    switch (node.rule) {
        case ProofTrace::Rule::Refl:
            return g.rel == Relation::Eq && g.left == g.right && node.premises.empty();

        case ProofTrace::Rule::Mirror:
            return g.rel == Relation::Sup && node.premises.size() == 1 &&
                   node.premises[0].goal == Judgement{g.right, g.left, Relation::Sub} &&
                   validStep(table, node.premises[0]);

        case ProofTrace::Rule::Var: {
            if (g.rel != Relation::Sub || g.left.name() != g.right.name()) return false;
            const ClassDecl* decl = table.find(g.left.name());
            if (!decl || decl->rank() != g.left.arity() || decl->rank() != g.right.arity()) return false;
            if (node.premises.size() != decl->rank()) return false;
            for (std::size_t i = 0; i < decl->rank(); ++i) {
                Judgement expect{g.left.child(i), g.right.child(i), relationFor(decl->varianceAt(i))};
                if (!(node.premises[i].goal == expect) || !validStep(table, node.premises[i])) return false;
            }
            return true;
        }

        case ProofTrace::Rule::Super: {
            if (g.rel != Relation::Sub || node.className != g.left.name() || node.premises.size() != 1)
                return false;
            const ClassDecl* decl = table.find(g.left.name());
            if (!decl || decl->rank() != g.left.arity() || node.superIndex >= decl->supertypes.size())
                return false;
            Term next = applySubst(decl->supertypes[node.superIndex], decl->bind(g.left));
            return node.premises[0].goal == Judgement{next, g.right, Relation::Sub} &&
                   validStep(table, node.premises[0]);
        }
    }
    return false;
}

nlohmann::json toJson(const ProofTrace& t) {
    nlohmann::json j{{"rule", ruleName(t.rule)},
                     {"left", t.goal.left.str()},
                     {"rel", relationSymbol(t.goal.rel)},
                     {"right", t.goal.right.str()}};
    if (t.rule == ProofTrace::Rule::Super) {
        j["class"] = t.className;
        j["index"] = t.superIndex;
    }
    if (!t.premises.empty()) {
        nlohmann::json ps = nlohmann::json::array();
        for (const ProofTrace& p : t.premises) ps.push_back(toJson(p));
        j["premises"] = std::move(ps);
    }
    return j;
}

ProofTrace fromJson(const nlohmann::json& j) {
    ProofTrace t;
    std::string rule = j.at("rule").get<std::string>();
    if (rule == "Refl") t.rule = ProofTrace::Rule::Refl;
    else if (rule == "Var") t.rule = ProofTrace::Rule::Var;
    else if (rule == "Super") t.rule = ProofTrace::Rule::Super;
    else if (rule == "Mirror") t.rule = ProofTrace::Rule::Mirror;
    else throw Error(kParse, "unknown trace rule '" + rule + "'");
    t.goal = {parseTerm(j.at("left").get<std::string>()), parseTerm(j.at("right").get<std::string>()),
              relationFromSymbol(j.at("rel").get<std::string>())};
    if (t.rule == ProofTrace::Rule::Super) {
        t.className = j.at("class").get<std::string>();
        t.superIndex = j.at("index").get<std::size_t>();
    }
    if (j.contains("premises"))
        for (const auto& p : j["premises"]) t.premises.push_back(fromJson(p));
    return t;
}

}  // namespace

bool checkTrace(const ClassTable& table, const SubtypeQuery& query, const ProofTrace& trace) {
    if (!(trace.goal == query.judgement())) return false;
    try {
        return validStep(table, trace);
    } catch (const Error&) {
        return false;
    }
}

std::string traceToJson(const ProofTrace& trace) { return toJson(trace).dump(2); }

ProofTrace traceFromJson(std::string_view json) {
    try {
        return fromJson(nlohmann::json::parse(json));
    } catch (const nlohmann::json::exception& e) {
        throw Error(kParse, std::string("malformed trace JSON: ") + e.what());
    }
}

ProofTrace reflexiveTrace(const ClassTable& table, const Term& t, Relation rel) {
    ProofTrace node;
    node.goal = {t, t, rel};
    if (rel == Relation::Eq) {
        node.rule = ProofTrace::Rule::Refl;
    } else if (rel == Relation::Sup) {
        node.rule = ProofTrace::Rule::Mirror;
        node.premises.push_back(reflexiveTrace(table, t, Relation::Sub));
    } else {
        node.rule = ProofTrace::Rule::Var;
        const ClassDecl& decl = table.at(t.name());
        for (std::size_t i = 0; i < t.arity(); ++i)
            node.premises.push_back(reflexiveTrace(table, t.child(i), relationFor(decl.varianceAt(i))));
    }
    return node;
}

const char* verdictName(const Verdict& v) {
    switch (v.index()) {
        case 0: return "holds";
        case 1: return "fails";
        case 2: return "cycle-rejected";
        default: return "undecided";
    }
}

std::optional<Verdict> DecisionCache::lookup(std::size_t table, const Judgement& j) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(Key{table, j.left.id(), j.right.id(), static_cast<int>(j.rel)});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void DecisionCache::store(std::size_t table, const Judgement& j, const Verdict& v) {
    std::lock_guard lock(mutex_);
    entries_.insert_or_assign(Key{table, j.left.id(), j.right.id(), static_cast<int>(j.rel)}, v);
}

std::size_t DecisionCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

void validateQuery(const ClassTable& table, const SubtypeQuery& query) {
    if (!query.left.valid() || !query.right.valid()) throw Error(kInvalidArgument, "empty query side");
    checkGroundType(table, query.left);
    checkGroundType(table, query.right);
    auto within = [](const Term& t, const std::set<std::string>& alphabet, const char* side) {
        if (alphabet.empty()) return;
        std::vector<Term> work{t};
        while (!work.empty()) {
            Term n = work.back();
            work.pop_back();
            if (!alphabet.count(n.name()))
                throw Error(kAlphabetViolation, std::string("class '") + n.name() + "' is not allowed on the " +
                                                    side + " side of the query");
            for (const Term& c : n.children()) work.push_back(c);
        }
    };
    within(query.left, query.split.sub, "left");
    within(query.right, query.split.sup, "right");
}

}  // namespace treetop
