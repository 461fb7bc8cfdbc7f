#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <complex>

namespace cadmm {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Per-entry absolute tolerance for accepting a matrix as Hermitian.
inline constexpr double kHermitianTol = 1e-12;

/// Eigendecomposition of a Hermitian matrix: A = basis * diag(eigenvalues) * basis^H,
/// eigenvalues ascending, basis unitary.
struct EigDecomposition {
    RealVector eigenvalues;
    ComplexMatrix basis;

    double lambda_min() const { return eigenvalues(0); }
    double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
};

/// Throws ValidationError naming the first offending entry if A is not square,
/// has a non-finite entry, or |A(j,k) - conj(A(k,j))| exceeds tol anywhere.
void validate_hermitian(const ComplexMatrix& A, double tol = kHermitianTol);

/// (A + A^H) / 2. Exactly Hermitian output for downstream math.
ComplexMatrix symmetrize(const ComplexMatrix& A);

void validate_finite(const ComplexVector& v, const char* name);

/// Dense Hermitian eigendecomposition. Validates, symmetrizes, then
/// delegates to Eigen's self-adjoint solver.
EigDecomposition eig_hermitian(const ComplexMatrix& A);

/// g(x) = x^H A x - 2 Re{b^H x} for Hermitian A. The imaginary part of
/// x^H A x must vanish to within 1e-10 * (1 + |x^H A x|); it is checked and
/// discarded.
double quad_form(const ComplexMatrix& A, const ComplexVector& b, const ComplexVector& x);

/// Cached Cholesky factorization of A + shift*I. The handle is immutable
/// after construction and shareable across threads; callers decide how long
/// to reuse it.
class ShiftedPdSolver {
  public:
    /// Factorizes A + shift*I. Throws NotPositiveDefiniteError if the
    /// shifted matrix is not positive definite (shift <= -lambda_min(A)).
    ShiftedPdSolver(const ComplexMatrix& A, double shift);

    ComplexVector solve(const ComplexVector& rhs) const;

    double shift() const { return shift_; }
    Eigen::Index dim() const { return n_; }

  private:
    Eigen::LLT<ComplexMatrix> llt_;
    double shift_ = 0.0;
    Eigen::Index n_ = 0;
};

/// One-shot convenience wrapper around ShiftedPdSolver.
ComplexVector solve_shifted_pd(const ComplexMatrix& A, double shift, const ComplexVector& rhs);

}  // namespace cadmm
