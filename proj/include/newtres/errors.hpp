#pragma once
/**
 * @file errors.hpp
 * @brief Exception hierarchy for simulation failures. Precondition misuse
 *        throws std::invalid_argument instead; ComputationError and its
 *        children mean the inputs were legal but the computation could not
 *        deliver a result.
 */

#include <stdexcept>
#include <string>

namespace newtres {

/// Base for all runtime simulation failures.
struct ComputationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A trajectory exceeded the reflection cap without exiting.
struct TrappedError : ComputationError {
    using ComputationError::ComputationError;
};

/// A ray escaped the chain without crossing the opening (invalid geometry).
struct GeometryError : ComputationError {
    using ComputationError::ComputationError;
};

/// An iterative refinement failed to reach the requested tolerance.
struct ConvergenceError : ComputationError {
    using ComputationError::ComputationError;
};

}  // namespace newtres
