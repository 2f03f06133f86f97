#pragma once

#include <stdexcept>
#include <string>

namespace ipstar {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An element does not belong to the structure an operation expects,
/// or the structure lacks the operation (e.g. addition in a free semigroup).
struct KindMismatchError : Error {
    using Error::Error;
};

/// A membership query fell outside the set's declared evaluable support.
/// Raised instead of answering false.
struct SupportExceededError : Error {
    using Error::Error;
};

/// An exhaustive search exceeded its configured guard. The message carries
/// a cost estimate so the caller can decide whether to raise the guard.
struct GuardExceededError : Error {
    using Error::Error;
};

/// The subgroup is {0}; cosets and index are undefined.
struct TrivialSubgroupError : Error {
    using Error::Error;
};

/// Operation requires a finite-index subgroup.
struct InfiniteIndexError : Error {
    using Error::Error;
};

/// Operation requires an infinite-index subgroup.
struct FiniteIndexError : Error {
    using Error::Error;
};

/// A sequence or window has the wrong length for the operation.
struct LengthError : Error {
    using Error::Error;
};

/// A greedy or exhaustive search ran out of candidates within its budget.
struct SearchExhaustedError : Error {
    using Error::Error;
};

/// FS of the supplied sequence contains 0 where the construction forbids it.
struct ZeroInFsError : Error {
    using Error::Error;
};

/// Experiment configuration is malformed (unknown key, bad type, bad bound).
struct InvalidConfigError : Error {
    using Error::Error;
};

/// Experiment name not present in the registry.
struct UnknownExperimentError : InvalidConfigError {
    using InvalidConfigError::InvalidConfigError;
};

/// A certificate failed re-verification during report assembly. Always a bug.
struct RecheckFailureError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace ipstar
