#include "oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

namespace cadmm::oracle {

double eval_quad(const ComplexMatrix& A, const ComplexVector& b, const ComplexVector& x) {
    Complex quad(0.0, 0.0);
    for (Eigen::Index j = 0; j < A.rows(); ++j) {
        for (Eigen::Index k = 0; k < A.cols(); ++k) {
            quad += std::conj(x(j)) * A(j, k) * x(k);
        }
    }
    double lin = 0.0;
    for (Eigen::Index j = 0; j < b.size(); ++j) {
        lin += (std::conj(b(j)) * x(j)).real();
    }
    return quad.real() - 2.0 * lin;
}

Qcqp1OracleResult qcqp1_dense_mu(const Qcqp1Problem& prob, long grid_points) {
    const auto n = prob.v.size();
    if (eval_quad(prob.A, prob.b, prob.v) <= prob.c) {
        throw std::invalid_argument("dense-mu oracle expects an active constraint at v");
    }
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(prob.A);
    const double lam_min = es.eigenvalues()(0);
    const bool bounded = lam_min < 0.0;
    const double mu_hi = bounded ? -1.0 / lam_min : 0.0;

    const double feas_tol = 1e-9 * (1.0 + std::abs(prob.c));
    ComplexMatrix shifted(n, n);
    Eigen::PartialPivLU<ComplexMatrix> lu;
    Qcqp1OracleResult best;
    bool found = false;
    for (long g = 0; g < grid_points; ++g) {
        const double t = static_cast<double>(g) / static_cast<double>(grid_points);
        const double mu = bounded ? mu_hi * t : t / (1.0 - t);
        shifted = ComplexMatrix::Identity(n, n) + mu * prob.A;
        lu.compute(shifted);
        const ComplexVector z = lu.solve(prob.v + mu * prob.b);
        if (!z.allFinite()) continue;
        if (eval_quad(prob.A, prob.b, z) > prob.c + feas_tol) continue;
        const double dist = (z - prob.v).norm();
        if (!found || dist < best.distance) {
            best.z = z;
            best.distance = dist;
            best.mu = mu;
            found = true;
        }
    }
    if (!found) {
        throw std::runtime_error("dense-mu oracle found no feasible candidate (inconclusive)");
    }
    return best;
}

namespace {

// One-constraint projection by bisection on the naive path, matching the
// library's documented tolerances but with fresh LU solves per evaluation.
ComplexVector reference_project(const ComplexMatrix& A, const ComplexVector& b, double c,
                                const ComplexVector& v, double tol) {
    if (eval_quad(A, b, v) <= c) return v;
    const auto n = v.size();
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(A);
    const double lam_min = es.eigenvalues()(0);

    auto z_of = [&](double mu) -> ComplexVector {
        const ComplexMatrix shifted = ComplexMatrix::Identity(n, n) + mu * A;
        return shifted.partialPivLu().solve(v + mu * b);
    };
    auto phi = [&](double mu) { return eval_quad(A, b, z_of(mu)) - c; };

    double hi = 0.0;
    bool bracketed = false;
    if (lam_min < 0.0) {
        const double pole = -1.0 / lam_min;
        double gap = 0.5;
        for (int k = 1; k <= 60 && !bracketed; ++k, gap *= 0.5) {
            const double cand = pole * (1.0 - gap);
            if (cand > 0.0 && phi(cand) < 0.0) {
                hi = cand;
                bracketed = true;
            }
        }
    } else {
        double cand = 1.0;
        for (int k = 0; k <= 60 && !bracketed; ++k, cand *= 2.0) {
            if (phi(cand) < 0.0) {
                hi = cand;
                bracketed = true;
            }
        }
    }
    if (!bracketed) {
        throw std::runtime_error("reference projection could not bracket the multiplier");
    }

    const double hi_used = hi;
    double lo = 0.0;
    double mu_star = hi;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * (1.0 + hi_used); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double p = phi(mid);
        if (std::abs(p) <= tol * (1.0 + std::abs(c))) {
            mu_star = mid;
            return z_of(mu_star);
        }
        if (p > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return z_of(hi);
}

}  // namespace

IterateState reference_step(const QcqpInstance& inst, const IterateState& state,
                            const SolverConfig& config) {
    const auto n = static_cast<Eigen::Index>(inst.n);
    const auto m = static_cast<std::size_t>(inst.m());
    const double rho = config.rho;

    IterateState next;
    next.k = state.k + 1;
    next.z.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& con = inst.constraints[i];
        next.z[i] = reference_project(con.A, con.b, con.c, state.x - state.u[i],
                                      config.qcqp1_tol);
    }
    ComplexVector rhs = inst.b0;
    for (std::size_t i = 0; i < m; ++i) rhs += rho * (next.z[i] + state.u[i]);
    const ComplexMatrix lhs =
        inst.A0 + static_cast<double>(m) * rho * ComplexMatrix::Identity(n, n);
    next.x = lhs.partialPivLu().solve(rhs);
    next.u.resize(m);
    for (std::size_t i = 0; i < m; ++i) next.u[i] = state.u[i] + next.z[i] - next.x;
    return next;
}

std::optional<GlobalSearchResult> small_global_search(const QcqpInstance& inst,
                                                      double half_width, int grid,
                                                      int zoom_rounds) {
    const int n = inst.n;
    if (n > 2) throw std::invalid_argument("global search supports n <= 2 only");
    auto require_real = [](const ComplexMatrix& A, const ComplexVector& b) {
        if (A.imag().cwiseAbs().maxCoeff() > 1e-12 || b.imag().cwiseAbs().maxCoeff() > 1e-12) {
            throw std::invalid_argument("global search expects real-valued data");
        }
    };
    require_real(inst.A0, inst.b0);
    for (const auto& con : inst.constraints) require_real(con.A, con.b);

    auto eval_real = [&](const ComplexMatrix& A, const ComplexVector& b,
                         const Eigen::VectorXd& x) {
        double quad = 0.0;
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) quad += x(j) * A(j, k).real() * x(k);
        }
        double lin = 0.0;
        for (int j = 0; j < n; ++j) lin += b(j).real() * x(j);
        return quad - 2.0 * lin;
    };
    auto feasible = [&](const Eigen::VectorXd& x) {
        for (const auto& con : inst.constraints) {
            if (eval_real(con.A, con.b, x) > con.c + 1e-9) return false;
        }
        return true;
    };

    Eigen::VectorXd center = Eigen::VectorXd::Zero(n);
    double h = half_width;
    double step = 0.0;
    bool found = false;
    Eigen::VectorXd best_x = center;
    double best_value = 0.0;

    for (int round = 0; round <= zoom_rounds; ++round) {
        step = 2.0 * h / static_cast<double>(grid - 1);
        Eigen::VectorXd x(n);
        const int jmax = n == 2 ? grid : 1;
        for (int i = 0; i < grid; ++i) {
            x(0) = center(0) - h + step * i;
            for (int j = 0; j < jmax; ++j) {
                if (n == 2) x(1) = center(1) - h + step * j;
                if (!feasible(x)) continue;
                const double value = eval_real(inst.A0, inst.b0, x);
                if (!found || value < best_value) {
                    best_x = x;
                    best_value = value;
                    found = true;
                }
            }
        }
        if (!found) return std::nullopt;
        center = best_x;
        h = 2.0 * step;
    }
    return GlobalSearchResult{best_x, best_value, step};
}

}  // namespace cadmm::oracle
