#pragma once

#include "cadmm/linalg.hpp"

namespace cadmm {

/// Single-constraint projection: minimize ||z - v||^2 subject to
/// z^H A z - 2 Re{b^H z} <= c, with Hermitian (possibly indefinite) A.
struct Qcqp1Problem {
    ComplexMatrix A;
    ComplexVector b;
    double c = 0.0;
    ComplexVector v;
};

struct Qcqp1Solution {
    ComplexVector z;
    double multiplier = 0.0;  ///< KKT multiplier of the constraint, >= 0
    bool active = false;      ///< false: z == v and multiplier == 0
    int bisection_iters = 0;
    bool hard_case = false;   ///< multiplier search hit a pole; v was perturbed
};

/// Exact projector onto one quadratic constraint set. Construction
/// eigendecomposes A once; project() is then pure and thread-safe, so one
/// projector per constraint can be reused across all solver iterations.
///
/// Method: if g(v) <= c the constraint is inactive and z = v. Otherwise the
/// KKT system gives z(mu) = (I + mu A)^{-1}(v + mu b); in the eigenbasis of A
/// each component is (a_j + mu b_j) / (1 + mu lam_j). The scalar
/// phi(mu) = g(z(mu)) - c is strictly decreasing on [0, mu_hi), with
/// mu_hi = -1/lambda_min(A) when lambda_min < 0 and +inf otherwise, so the
/// active multiplier is found by bisection on phi.
class Qcqp1Projector {
  public:
    Qcqp1Projector(const ComplexMatrix& A, ComplexVector b, double c);

    /// tol bounds the constraint residual of an active solution:
    /// |g(z) - c| <= tol * (1 + |c|). Throws InfeasibleSubproblemError when
    /// the constraint set is empty.
    Qcqp1Solution project(const ComplexVector& v, double tol = 1e-10) const;

    const EigDecomposition& decomposition() const { return eig_; }
    double constraint_offset() const { return c_; }

  private:
    EigDecomposition eig_;
    ComplexVector b_;
    ComplexVector b_rot_;  // basis^H b
    double c_ = 0.0;
    Eigen::Index n_ = 0;

    Qcqp1Solution solve_active(const ComplexVector& v_rot, double tol, bool already_perturbed) const;
};

/// One-shot convenience wrapper; prefer Qcqp1Projector when A is reused.
Qcqp1Solution project_qcqp1(const Qcqp1Problem& prob, double tol = 1e-10);

}  // namespace cadmm
