#pragma once

#include <cstdint>

#include "cadmm/qcqp.hpp"

namespace cadmm {

struct GenSpec {
    int n = 10;
    int m = 5;
    bool pd_A0 = false;  ///< shift A0 to be positive definite
    std::uint64_t seed = 0;
};

struct GeneratedInstance {
    QcqpInstance instance;
    ComplexVector x_feas;
};

/// Seeded random QCQP instance with a guaranteed-feasible point.
///
/// Construction, in fixed draw order from one PortableRng stream:
///   1. x_feas with CN(0,1) entries;
///   2. A0: an n x n CN(0,1) matrix (rows outer, columns inner) averaged with
///      its adjoint; when pd_A0 is false the draw is repeated (up to 16
///      times) until lambda_min < 0 < lambda_max, when pd_A0 is true
///      (|lambda_min| + 1) * I is added so lambda_min(A0) >= 1;
///   3. b0 with CN(0,1) entries;
///   4. per constraint i = 1..m: A_i as in step 2 (no indefiniteness
///      redraw), b_i as in step 3, then one real N(0,1) draw v_i with
///      c_i = g_i(x_feas) + |v_i|.
/// The slack of constraint i at x_feas is therefore exactly |v_i| >= 0 and
/// the feasible set is never empty. Seed, x_feas, the PD shift and the
/// redraw count are recorded in the instance metadata.
GeneratedInstance generate(const GenSpec& spec);

}  // namespace cadmm
