#include "engine.hpp"
#include "treetop/error.hpp"

namespace treetop {

Subtyper::Subtyper(ClassTable table)
    : table_(std::make_unique<const ClassTable>(std::move(table))), features_(classify(*table_)),
      facts_(std::make_unique<detail::TableFacts>(*table_)), fingerprint_(fingerprint(*table_)) {}

Subtyper::~Subtyper() = default;

Verdict Subtyper::decide(const SubtypeQuery& query, const DecideOptions& options) const {
    validateQuery(*table_, query);
    const Judgement goal = query.judgement();

    if (goal.rel == Relation::Eq) {
        if (goal.left != goal.right) return Fails{};
        Holds h;
        if (options.withTrace)
            h.trace = std::make_shared<const ProofTrace>(reflexiveTrace(*table_, goal.left, Relation::Eq));
        return h;
    }

    if (options.cache) {
        if (auto hit = options.cache->lookup(fingerprint_, goal);
            hit && (!options.withTrace || !holds(*hit) || std::get<Holds>(*hit).trace))
            return *hit;
    }

    Verdict v;
    if (!features_.contravariance) {
        v = detail::runNonContravariant(*facts_, goal, options);
    } else if (!features_.expansive || options.boundedSearch) {
        v = detail::runNonExpansive(*facts_, goal, options);
    } else {
        return Undecided{"contravariant table with expansive recursion: no decision procedure applies"};
    }

    if (options.cache && !std::holds_alternative<Undecided>(v)) options.cache->store(fingerprint_, goal, v);
    return v;
}

Verdict decide(const ClassTable& table, const SubtypeQuery& query, const DecideOptions& options) {
    return Subtyper(table).decide(query, options);
}

}  // namespace treetop
