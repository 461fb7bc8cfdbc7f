#include "cadmm/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <string>

#include "cadmm/errors.hpp"

namespace cadmm {

namespace {

std::string entry_str(const char* what, Eigen::Index j, Eigen::Index k, Complex value) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s at entry (%lld, %lld): (%.6g, %.6g)", what,
                  static_cast<long long>(j), static_cast<long long>(k), value.real(),
                  value.imag());
    return std::string(buf);
}

}  // namespace

void validate_hermitian(const ComplexMatrix& A, double tol) {
    if (A.rows() != A.cols()) {
        throw ValidationError("matrix is not square: " + std::to_string(A.rows()) + "x" +
                              std::to_string(A.cols()));
    }
    for (Eigen::Index j = 0; j < A.rows(); ++j) {
        for (Eigen::Index k = 0; k < A.cols(); ++k) {
            const Complex a = A(j, k);
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw ValidationError(entry_str("non-finite matrix entry", j, k, a));
            }
            const Complex diff = a - std::conj(A(k, j));
            if (std::abs(diff) > tol) {
                throw ValidationError(entry_str("matrix is not Hermitian", j, k, a));
            }
        }
    }
}

ComplexMatrix symmetrize(const ComplexMatrix& A) { return 0.5 * (A + A.adjoint()); }

void validate_finite(const ComplexVector& v, const char* name) {
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        if (!std::isfinite(v(j).real()) || !std::isfinite(v(j).imag())) {
            throw ValidationError(std::string(name) + " has a non-finite entry at index " +
                                  std::to_string(j));
        }
    }
}

EigDecomposition eig_hermitian(const ComplexMatrix& A) {
    validate_hermitian(A);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetrize(A));
    if (solver.info() != Eigen::Success) {
        throw ValidationError("eigendecomposition did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double quad_form(const ComplexMatrix& A, const ComplexVector& b, const ComplexVector& x) {
    if (A.rows() != A.cols() || A.rows() != x.size() || b.size() != x.size()) {
        throw ValidationError("quad_form dimension mismatch: A is " + std::to_string(A.rows()) +
                              "x" + std::to_string(A.cols()) + ", b has " +
                              std::to_string(b.size()) + ", x has " + std::to_string(x.size()));
    }
    const ComplexVector Ax = A * x;
    const Complex xAx = x.dot(Ax);
    // The scale term keeps the check meaningful when x^H A x nearly cancels
    // (indefinite A with large iterates): rounding of the imaginary part
    // grows with the summand magnitudes, not with the result.
    const double scale = 1.0 + std::abs(xAx) + x.norm() * Ax.norm();
    if (std::abs(xAx.imag()) > 1e-10 * scale) {
        throw ValidationError("x^H A x has a non-negligible imaginary part (" +
                              std::to_string(xAx.imag()) + "); A is not Hermitian");
    }
    return xAx.real() - 2.0 * b.dot(x).real();
}

ShiftedPdSolver::ShiftedPdSolver(const ComplexMatrix& A, double shift) : shift_(shift), n_(A.rows()) {
    validate_hermitian(A);
    ComplexMatrix shifted = symmetrize(A);
    shifted.diagonal().array() += Complex(shift, 0.0);
    llt_.compute(shifted);
    if (llt_.info() != Eigen::Success) {
        throw NotPositiveDefiniteError("A + shift*I is not positive definite (shift = " +
                                       std::to_string(shift) + ")");
    }
}

ComplexVector ShiftedPdSolver::solve(const ComplexVector& rhs) const {
    if (rhs.size() != n_) {
        throw ValidationError("solve dimension mismatch: expected " + std::to_string(n_) +
                              ", got " + std::to_string(rhs.size()));
    }
    return llt_.solve(rhs);
}

ComplexVector solve_shifted_pd(const ComplexMatrix& A, double shift, const ComplexVector& rhs) {
    return ShiftedPdSolver(A, shift).solve(rhs);
}

}  // namespace cadmm
