#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cadmm/linalg.hpp"

namespace cadmm {

/// One quadratic inequality constraint g(x) = x^H A x - 2 Re{b^H x} <= c.
struct QcqpConstraint {
    ComplexMatrix A;
    ComplexVector b;
    double c = 0.0;
};

/// Provenance recorded by the instance generator; absent for hand-built
/// instances.
struct InstanceMeta {
    std::optional<std::uint64_t> seed;
    std::optional<ComplexVector> x_feas;
    std::optional<double> pd_shift;
    std::optional<int> redraws;
};

/// minimize    x^H A0 x - 2 Re{b0^H x}      over x in C^n
/// subject to  x^H A_i x - 2 Re{b_i^H x} <= c_i,   i = 1..m
///
/// All matrices are Hermitian (possibly indefinite). Instances are immutable
/// after construction; evaluation is pure and thread-safe.
struct QcqpInstance {
    int n = 0;
    ComplexMatrix A0;
    ComplexVector b0;
    std::vector<QcqpConstraint> constraints;
    InstanceMeta meta;

    int m() const { return static_cast<int>(constraints.size()); }
};

/// Validates dimensions, finiteness and Hermitian-ness (1e-12 per entry),
/// then symmetrizes every matrix so downstream math sees exactly Hermitian
/// data. Requires m >= 1.
QcqpInstance make_instance(ComplexMatrix A0, ComplexVector b0,
                           std::vector<QcqpConstraint> constraints, InstanceMeta meta = {});

/// Objective value x^H A0 x - 2 Re{b0^H x}.
double objective(const QcqpInstance& inst, const ComplexVector& x);

/// Constraint function value g_i(x) for the 0-based constraint index i;
/// the caller compares against constraints[i].c.
double constraint_value(const QcqpInstance& inst, int i, const ComplexVector& x);

struct FeasibilityReport {
    bool feasible = false;
    RealVector slack;         ///< c_i - g_i(x), one per constraint
    double worst_violation = 0.0;  ///< max(0, -min slack)
};

/// Default absolute tolerance on constraint slack.
inline constexpr double kFeasibilityTol = 1e-8;

/// Evaluates every constraint at x; feasible iff min slack >= -tol.
FeasibilityReport check_feasible(const QcqpInstance& inst, const ComplexVector& x,
                                 double tol = kFeasibilityTol);

/// Rewrites the quadratic equality g(x) = c as the pair of inequalities
/// {g(x) <= c, -g(x) <= -c}. A point satisfies both iff it satisfies the
/// equality.
std::pair<QcqpConstraint, QcqpConstraint> expand_equality(const ComplexMatrix& A,
                                                          const ComplexVector& b, double c);

/// JSON serialization. Complex scalars are [re, im] pairs, matrices are
/// arrays of row arrays, fields are n, m, A0, b0, constraints[{A, b, c}] and
/// optional meta{seed, x_feas, pd_shift, redraws}.
std::string instance_to_json(const QcqpInstance& inst, int indent = 2);
QcqpInstance instance_from_json(const std::string& text);
void save_instance(const QcqpInstance& inst, const std::string& path);
QcqpInstance load_instance(const std::string& path);

}  // namespace cadmm
