#include "treetop/term.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <unordered_map>

#include "treetop/error.hpp"

namespace treetop {

namespace detail {

struct TermNode {
    bool param = false;
    std::string name;
    std::vector<Term> children;
    std::size_t hash = 0;
    std::size_t height = 0;
    std::size_t size = 1;
    bool ground = true;
};

}  // namespace detail

namespace {

using detail::TermNode;

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

class Interner {
public:
    const TermNode* intern(bool param, std::string_view name, std::vector<Term>&& children) {
        std::size_t h = mix(std::hash<std::string_view>{}(name), param ? 1 : 2);
        for (const Term& c : children) h = mix(h, c.hash());

        std::lock_guard lock(mutex_);
        auto [lo, hi] = index_.equal_range(h);
        for (auto it = lo; it != hi; ++it) {
            const TermNode* n = it->second;
            if (n->param == param && n->name == name && n->children == children) return n;
        }
        TermNode& n = storage_.emplace_back();
        n.param = param;
        n.name = std::string(name);
        n.hash = h;
        n.ground = !param;
        for (const Term& c : children) {
            n.height = std::max(n.height, c.height() + 1);
            n.size += c.size();
            n.ground = n.ground && c.isGround();
        }
        n.children = std::move(children);
        index_.emplace(h, &n);
        return &n;
    }

    std::size_t count() {
        std::lock_guard lock(mutex_);
        return storage_.size();
    }

private:
    std::mutex mutex_;
    std::deque<TermNode> storage_;
    std::unordered_multimap<std::size_t, const TermNode*> index_;
};

Interner& interner() {
    static Interner* pool = new Interner();
    return *pool;
}

}  // namespace

Term Term::node(std::string_view name, std::vector<Term> children) {
    for (const Term& c : children)
        if (!c.valid()) throw Error(kInvalidArgument, "null child term under " + std::string(name));
    return Term(interner().intern(false, name, std::move(children)));
}

Term Term::param(std::string_view name) { return Term(interner().intern(true, name, {})); }

bool Term::isParam() const { return node_->param; }
const std::string& Term::name() const { return node_->name; }
std::span<const Term> Term::children() const { return node_->children; }
const Term& Term::child(std::size_t i) const { return node_->children.at(i); }
std::size_t Term::arity() const { return node_->children.size(); }
std::size_t Term::height() const { return node_->height; }
std::size_t Term::size() const { return node_->size; }
bool Term::isGround() const { return node_->ground; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }

std::string Term::str() const {
    if (!valid()) return "<null>";
    std::string out = name();
    if (arity() == 0) return out;
    out += '(';
    for (std::size_t i = 0; i < arity(); ++i) {
        if (i) out += ", ";
        out += child(i).str();
    }
    out += ')';
    return out;
}

int compareTerms(const Term& a, const Term& b) {
    if (a == b) return 0;
    if (a.isParam() != b.isParam()) return a.isParam() ? -1 : 1;
    if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
    std::size_t n = std::min(a.arity(), b.arity());
    for (std::size_t i = 0; i < n; ++i)
        if (int c = compareTerms(a.child(i), b.child(i)); c != 0) return c;
    if (a.arity() == b.arity()) return 0;
    return a.arity() < b.arity() ? -1 : 1;
}

namespace {

bool matchInto(const Term& pattern, const Term& subject, Substitution& s) {
    if (pattern.isParam()) {
        auto [it, inserted] = s.emplace(pattern.name(), subject);
        return inserted || it->second == subject;
    }
    if (subject.isParam() || pattern.name() != subject.name() || pattern.arity() != subject.arity())
        return false;
    for (std::size_t i = 0; i < pattern.arity(); ++i)
        if (!matchInto(pattern.child(i), subject.child(i), s)) return false;
    return true;
}

}  // namespace

std::optional<Substitution> matchPattern(const Term& pattern, const Term& subject) {
    Substitution s;
    if (!matchInto(pattern, subject, s)) return std::nullopt;
    return s;
}

Term applySubst(const Term& pattern, const Substitution& subst) {
    if (pattern.isParam()) {
        auto it = subst.find(pattern.name());
        if (it == subst.end())
            throw Error(kUnboundParameter, "parameter '" + pattern.name() + "' is not bound");
        return it->second;
    }
    if (pattern.arity() == 0) return pattern;
    std::vector<Term> kids;
    kids.reserve(pattern.arity());
    for (const Term& c : pattern.children()) kids.push_back(applySubst(c, subst));
    return Term::node(pattern.name(), std::move(kids));
}

namespace {

void collectParams(const Term& t, std::vector<std::string>& out) {
    if (t.isParam()) {
        if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
        return;
    }
    for (const Term& c : t.children()) collectParams(c, out);
}

}  // namespace

std::vector<std::string> paramsOf(const Term& t) {
    std::vector<std::string> out;
    collectParams(t, out);
    return out;
}

bool containsParam(const Term& t, std::string_view name) {
    if (t.isGround()) return false;
    if (t.isParam()) return t.name() == name;
    return std::any_of(t.children().begin(), t.children().end(),
                       [&](const Term& c) { return containsParam(c, name); });
}

std::size_t internedTermCount() { return interner().count(); }

namespace {

class TermParser {
public:
    TermParser(std::string_view text, const std::function<bool(std::string_view)>& isParam)
        : text_(text), isParam_(isParam) {}

    Term parseAll() {
        Term t = parse();
        skipSpace();
        if (pos_ != text_.size()) fail("trailing input");
        return t;
    }

private:
    Term parse() {
        skipSpace();
        std::size_t start = pos_;
        while (pos_ < text_.size() && isIdentChar(text_[pos_])) ++pos_;
        if (start == pos_) fail("expected identifier");
        std::string_view name = text_.substr(start, pos_ - start);
        skipSpace();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            ++pos_;
            std::vector<Term> kids;
            skipSpace();
            if (pos_ < text_.size() && text_[pos_] == ')') {
                ++pos_;
                return Term::node(name);
            }
            while (true) {
                kids.push_back(parse());
                skipSpace();
                if (pos_ >= text_.size()) fail("unterminated argument list");
                if (text_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                if (text_[pos_] == ')') {
                    ++pos_;
                    break;
                }
                fail("expected ',' or ')'");
            }
            return Term::node(name, std::move(kids));
        }
        if (isParam_ && isParam_(name)) return Term::param(name);
        return Term::node(name);
    }

    static bool isIdentChar(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    void skipSpace() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw Error(kParse, "cannot parse term '" + std::string(text_) + "' at offset " +
                                std::to_string(pos_) + ": " + why);
    }

    std::string_view text_;
    const std::function<bool(std::string_view)>& isParam_;
    std::size_t pos_ = 0;
};

}  // namespace

Term parseTerm(std::string_view text, const std::function<bool(std::string_view)>& isParam) {
    return TermParser(text, isParam).parseAll();
}

Term monadicChain(std::span<const std::string> symbols, const Term& end) {
    Term t = end;
    for (auto it = symbols.rbegin(); it != symbols.rend(); ++it) t = Term::node(*it, {t});
    return t;
}

}  // namespace treetop
