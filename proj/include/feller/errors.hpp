#pragma once

#include <stdexcept>
#include <string>

namespace feller {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input fails a structural invariant (metric axioms, rate-matrix shape,
// probability-vector normalization, ...). Messages carry the offending
// indices.
struct ValidationError : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// Operator-log series evaluated outside its convergence ball.
struct DomainError : Error {
    DomainError(const std::string& what, double norm_arg)
        : Error(what), norm(norm_arg) {}
    double norm;
};

struct CommutatorError : Error {
    CommutatorError(const std::string& what, double norm_arg)
        : Error(what), commutator_norm(norm_arg) {}
    double commutator_norm;
};

struct NegativeTime : Error {
    using Error::Error;
};

struct UnsortedTimes : Error {
    using Error::Error;
};

struct TimeOrder : Error {
    using Error::Error;
};

struct InvalidHorizon : Error {
    using Error::Error;
};

struct OutOfHorizon : Error {
    using Error::Error;
};

struct ProfileTooShort : Error {
    using Error::Error;
};

// A one-sided rational limit failed to settle within the offset scheme.
struct NoStabilization : Error {
    using Error::Error;
};

// No conditioning state at time s collected enough samples to estimate a
// conditional mean.
struct InsufficientConditioningMass : Error {
    using Error::Error;
};

}  // namespace feller
