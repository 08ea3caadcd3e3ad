#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

/// Malformed input: dimension mismatch, zero vector where a nonzero one is required.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A scalar parameter lies outside its admissible range (λ ≥ μ > 0, FD step bounds, ‖X₀‖ < 1, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Reference vector of the osculating metric is (numerically) zero.
class DegenerateVectorError : public InputError {
public:
    using InputError::InputError;
};

/// Vector lies outside the subspace an operation is defined on.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The two vectors of a flag do not span a plane.
class DegenerateFlagError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical invariant that construction should guarantee was violated.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The sign search exhausted its sample budget.
class SearchFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace finsler
