#pragma once

#include <stdexcept>
#include <string>

namespace capdesc {

// Every failure the library reports derives from Error; `kind()` is the
// machine-readable class name used by the CLI error record and exit code.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define CAPDESC_ERROR(Name, tag)                                        \
    class Name : public Error {                                         \
    public:                                                             \
        explicit Name(const std::string& what) : Error(tag, what) {}    \
    }

CAPDESC_ERROR(ParseError, "parse-error");
CAPDESC_ERROR(DivisionByZero, "division-by-zero");
CAPDESC_ERROR(PoleAtPoint, "pole-at-point");
CAPDESC_ERROR(OutOfWindow, "out-of-window");
CAPDESC_ERROR(EmptyWindow, "empty-window");
CAPDESC_ERROR(SizeMismatch, "size-mismatch");
CAPDESC_ERROR(PreconditionViolation, "precondition-violation");
CAPDESC_ERROR(UnsupportedClass, "unsupported-class");
CAPDESC_ERROR(MissingProviderEntry, "missing-provider-entry");
CAPDESC_ERROR(InductionOrderViolation, "induction-order-violation");
CAPDESC_ERROR(RankDeficient, "rank-deficient");
CAPDESC_ERROR(InconsistentSystem, "inconsistent-system");
CAPDESC_ERROR(InsufficientWindow, "insufficient-window");
CAPDESC_ERROR(SchemaError, "schema-error");
CAPDESC_ERROR(IoError, "io-error");

#undef CAPDESC_ERROR

}  // namespace capdesc
