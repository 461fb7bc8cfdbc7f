#pragma once

#include <stdexcept>
#include <string>

namespace cadmm {

/// Input data violates a structural invariant (non-Hermitian matrix,
/// dimension mismatch, non-finite entry).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numeric parameter is outside its admissible range (e.g. rho at or
/// below the strong-convexity floor).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The shifted matrix A + shift*I is not positive definite.
struct NotPositiveDefiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A single-constraint projection subproblem has an empty feasible set.
struct InfeasibleSubproblemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File or serialization failure.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cadmm
