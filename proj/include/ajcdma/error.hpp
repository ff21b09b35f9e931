// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ajcdma {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid parameter value (non-power-of-two code length, negative counts, ...).
struct ParameterError : Error {
    using Error::Error;
};

/// Operand shapes do not agree, or an index is out of range.
struct DimensionError : Error {
    using Error::Error;
};

/// Input violates an operation's contract (e.g. non-Hermitian matrix passed
/// to the Hermitian eigensolver).
struct ContractViolation : Error {
    using Error::Error;
};

/// Input is degenerate for the requested operation (zero jamming matrix,
/// rank-deficient covariance, ...).
struct DegenerateInputError : Error {
    using Error::Error;
};

/// An underlying numerical routine failed to converge.
struct NumericalError : Error {
    using Error::Error;
};

/// The sampled downlink channel is numerically singular and cannot be
/// inverted; callers are expected to resample.
struct SingularChannelError : Error {
    using Error::Error;
};

/// File/stream failure, message carries the offending path.
struct IoError : Error {
    using Error::Error;
};

} // namespace ajcdma
