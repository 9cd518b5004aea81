#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kmarc {

// Element or object does not belong to the field it is used with.
struct ContextError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DivisionByZero : std::domain_error {
    DivisionByZero() : std::domain_error("division by zero") {}
};

// Bad input that is not a context mismatch (degenerate points, non-divisor degrees, ...).
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Linear system with dependent or inconsistent rows.
struct RankError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A construction precondition was violated or its output failed verification.
struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A q/16 tuple violates one of the admissibility invariants.
struct AdmissibilityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Point set that is expected to be a KM-arc but is not.
struct NotKMArcError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Search budget exhausted; lower_bound counts what was found before stopping.
struct ResourceError : std::runtime_error {
    std::uint64_t lower_bound;
    ResourceError(const std::string& what, std::uint64_t found)
        : std::runtime_error(what), lower_bound(found) {}
};

}  // namespace kmarc
