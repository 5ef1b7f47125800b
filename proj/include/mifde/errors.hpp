#pragma once

#include <stdexcept>
#include <string>

namespace mifde {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid input: bad parameters, inconsistent dimensions, unparseable files.
/// CLI maps these to exit code 2.
struct DomainError : Error {
    using Error::Error;
};

struct DimensionMismatch : DomainError {
    using DomainError::DomainError;
};

struct DegenerateInput : DomainError {
    using DomainError::DomainError;
};

struct DegreeViolation : DomainError {
    using DomainError::DomainError;
};

struct NonUniformGrid : DomainError {
    using DomainError::DomainError;
};

struct MethodInapplicable : DomainError {
    using DomainError::DomainError;
};

/// Numerical failure: non-convergence, overflow, singular systems.
/// CLI maps these to exit code 3.
struct NumericError : Error {
    using Error::Error;
};

struct NoConvergence : NumericError {
    using NumericError::NumericError;
};

struct OverflowDomain : NumericError {
    using NumericError::NumericError;
};

struct SingularMatrix : NumericError {
    using NumericError::NumericError;
};

struct RepeatedRoots : NumericError {
    using NumericError::NumericError;
};

struct ZeroRoot : NumericError {
    using NumericError::NumericError;
};

struct ConjugacyViolation : NumericError {
    using NumericError::NumericError;
};

} // namespace mifde
