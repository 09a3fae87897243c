#pragma once

#include <stdexcept>
#include <string>

namespace coherent {

/// Malformed input: bad syntax, wrong shapes, out-of-range coordinates.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A well-formed request outside the mathematical domain of an operation
/// (e.g. an exponent below 1 for the sequence functional).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// The caller broke a documented precondition (e.g. asked for uniqueness of
/// an incoherent measure).
struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Raised when a support does not have the combinatorial shape an algorithm
/// relies on (a traced path closing into a cycle, for instance).
struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace coherent
