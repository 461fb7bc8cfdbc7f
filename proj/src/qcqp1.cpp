#include "cadmm/qcqp1.hpp"

#include <cmath>
#include <limits>

#include "cadmm/errors.hpp"

namespace cadmm {

namespace {

constexpr double kPoleTol = 1e-10;        // |1 + mu*lambda_j| below this is a pole hit
constexpr double kBracketWidthTol = 1e-12;
constexpr int kBisectionCap = 200;
constexpr int kBracketGrowthCap = 60;     // doubling stops at 2^60
constexpr double kHardCasePerturbation = 1e-8;

struct PhiEval {
    double phi = 0.0;
    int pole_index = -1;  // >= 0: evaluation hit |1 + mu*lambda_j| < kPoleTol at this j
};

}  // namespace

Qcqp1Projector::Qcqp1Projector(const ComplexMatrix& A, ComplexVector b, double c)
    : eig_(eig_hermitian(A)), b_(std::move(b)), c_(c), n_(A.rows()) {
    if (b_.size() != n_) {
        throw ValidationError("constraint vector b has length " + std::to_string(b_.size()) +
                              ", expected " + std::to_string(n_));
    }
    validate_finite(b_, "b");
    if (!std::isfinite(c_)) throw ValidationError("constraint offset c must be finite");
    b_rot_ = eig_.basis.adjoint() * b_;
}

Qcqp1Solution Qcqp1Projector::project(const ComplexVector& v, double tol) const {
    if (v.size() != n_) {
        throw ValidationError("projection point has length " + std::to_string(v.size()) +
                              ", expected " + std::to_string(n_));
    }
    if (!(tol > 0.0)) throw ParameterError("projection tolerance must be positive");
    validate_finite(v, "v");

    const ComplexVector v_rot = eig_.basis.adjoint() * v;
    double g0 = 0.0;
    for (Eigen::Index j = 0; j < n_; ++j) {
        g0 += eig_.eigenvalues(j) * std::norm(v_rot(j)) -
              2.0 * (std::conj(b_rot_(j)) * v_rot(j)).real();
    }
    if (g0 <= c_) {
        Qcqp1Solution sol;
        sol.z = v;
        return sol;
    }
    return solve_active(v_rot, tol, false);
}

Qcqp1Solution Qcqp1Projector::solve_active(const ComplexVector& v_rot, double tol,
                                           bool already_perturbed) const {
    const RealVector& lam = eig_.eigenvalues;

    // phi(mu) = g(z(mu)) - c evaluated in the eigenbasis; strictly decreasing
    // until the first pole of (I + mu*A)^{-1}.
    auto eval = [&](double mu) -> PhiEval {
        double g = 0.0;
        for (Eigen::Index j = 0; j < n_; ++j) {
            const double denom = 1.0 + mu * lam(j);
            if (std::abs(denom) < kPoleTol) return {0.0, static_cast<int>(j)};
            const Complex w = (v_rot(j) + mu * b_rot_(j)) / denom;
            g += lam(j) * std::norm(w) - 2.0 * (std::conj(b_rot_(j)) * w).real();
        }
        if (std::isnan(g)) return {-std::numeric_limits<double>::infinity(), -1};
        return {g - c_, -1};
    };

    auto rebuild = [&](double mu) {
        ComplexVector w(n_);
        for (Eigen::Index j = 0; j < n_; ++j) {
            w(j) = (v_rot(j) + mu * b_rot_(j)) / (1.0 + mu * lam(j));
        }
        return (eig_.basis * w).eval();
    };

    auto perturb_and_retry = [&](int pole_index) -> Qcqp1Solution {
        if (already_perturbed) {
            throw std::runtime_error("projection hard case persisted after perturbation");
        }
        ComplexVector v_shifted = v_rot;
        v_shifted(pole_index) += kHardCasePerturbation;
        Qcqp1Solution sol = solve_active(v_shifted, tol, true);
        sol.hard_case = true;
        return sol;
    };

    // Right bracket end with phi < 0. Below the smallest pole when A has a
    // negative eigenvalue, otherwise by doubling.
    double hi = 0.0;
    bool bracketed = false;
    if (lam(0) < 0.0) {
        const double pole = -1.0 / lam(0);
        double gap = 0.5;
        for (int k = 1; k <= kBracketGrowthCap; ++k, gap *= 0.5) {
            const double cand = pole * (1.0 - gap);
            if (cand <= 0.0) continue;
            const PhiEval e = eval(cand);
            if (e.pole_index >= 0) return perturb_and_retry(e.pole_index);
            if (e.phi < 0.0) {
                hi = cand;
                bracketed = true;
                break;
            }
        }
        if (!bracketed) return perturb_and_retry(0);
    } else {
        double cand = 1.0;
        for (int k = 0; k <= kBracketGrowthCap; ++k, cand *= 2.0) {
            const PhiEval e = eval(cand);
            if (e.pole_index >= 0) return perturb_and_retry(e.pole_index);
            if (e.phi < 0.0) {
                hi = cand;
                bracketed = true;
                break;
            }
        }
        if (!bracketed) {
            throw InfeasibleSubproblemError(
                "constraint set appears empty: g(z(mu)) stayed above c up to mu = 2^60");
        }
    }

    const double hi_used = hi;
    double lo = 0.0;
    double mu_star = hi;
    int iters = 0;
    bool phi_converged = false;
    while (iters < kBisectionCap && (hi - lo) > kBracketWidthTol * (1.0 + hi_used)) {
        const double mid = 0.5 * (lo + hi);
        ++iters;
        const PhiEval e = eval(mid);
        if (e.pole_index >= 0) return perturb_and_retry(e.pole_index);
        if (std::abs(e.phi) <= tol * (1.0 + std::abs(c_))) {
            mu_star = mid;
            phi_converged = true;
            break;
        }
        if (e.phi > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (!phi_converged) mu_star = hi;  // feasible side of the bracket

    Qcqp1Solution sol;
    sol.z = rebuild(mu_star);
    sol.multiplier = mu_star;
    sol.active = true;
    sol.bisection_iters = iters;
    return sol;
}

Qcqp1Solution project_qcqp1(const Qcqp1Problem& prob, double tol) {
    Qcqp1Projector projector(prob.A, prob.b, prob.c);
    return projector.project(prob.v, tol);
}

}  // namespace cadmm
