#pragma once

#include <stdexcept>
#include <string>

namespace treetop {

// Every failure raised by the library carries a short stable code so the CLI
// and tests can tell them apart without parsing messages.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

inline constexpr const char* kUndeclaredClass = "undeclared-class";
inline constexpr const char* kArityMismatch = "arity-mismatch";
inline constexpr const char* kUnboundParameter = "unbound-parameter";
inline constexpr const char* kDuplicateName = "duplicate-name";
inline constexpr const char* kIllFormedTable = "ill-formed-table";
inline constexpr const char* kFragmentRefused = "fragment-refused";
inline constexpr const char* kAlphabetViolation = "alphabet-violation";
inline constexpr const char* kNotGnf = "not-gnf";
inline constexpr const char* kNameClash = "name-clash";
inline constexpr const char* kParse = "parse-error";
inline constexpr const char* kOverflow = "overflow";
inline constexpr const char* kInvalidArgument = "invalid-argument";

}  // namespace treetop
