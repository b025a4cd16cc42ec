#pragma once

#include <stdexcept>
#include <string>

namespace prefmono {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A comparison value lies outside the governing comparison domain.
struct DomainViolationError : Error {
    using Error::Error;
};

/// An input (score, weight, parameter) is nonfinite or otherwise malformed.
struct InputError : Error {
    using Error::Error;
};

/// A derivative was requested at a point where the loss is not differentiable.
struct NondifferentiableError : Error {
    using Error::Error;
};

/// The requested operation is undefined for this variant (e.g. cross-partial
/// on a discrete comparison domain).
struct UnsupportedOperationError : Error {
    using Error::Error;
};

/// An identifier does not resolve in the problem space.
struct LookupError : Error {
    using Error::Error;
};

/// A stated hypothesis of an audit or prediction is not met.
struct PreconditionError : Error {
    using Error::Error;
};

}  // namespace prefmono
