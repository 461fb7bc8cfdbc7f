#pragma once

// Brute-force references used only by tests and the acceptance suite. These
// deliberately share no numerical kernels with the library: quadratic forms
// are naive double loops, linear systems go through plain LU solves, and no
// factorization is cached, so agreement with the library is evidence rather
// than tautology.

#include <optional>

#include "cadmm/admm.hpp"
#include "cadmm/qcqp.hpp"
#include "cadmm/qcqp1.hpp"

namespace cadmm::oracle {

/// g(x) = x^H A x - 2 Re{b^H x} by explicit summation.
double eval_quad(const ComplexMatrix& A, const ComplexVector& b, const ComplexVector& x);

struct Qcqp1OracleResult {
    ComplexVector z;
    double distance = 0.0;  ///< ||z - v||_2
    double mu = 0.0;
};

/// Dense sweep of the one-constraint KKT path z(mu) = (I + mu A)^{-1}(v + mu b).
/// The grid covers [0, -1/lambda_min(A)) when A has a negative eigenvalue and
/// otherwise maps t in [0,1) through mu = t/(1-t). Keeps candidates with
/// g(z) <= c + 1e-9*(1+|c|) and returns the closest one to v.
///
/// Precondition: the constraint is active at v (g(v) > c); throws
/// std::invalid_argument otherwise, and std::runtime_error when no grid point
/// is feasible (oracle inconclusive, not a solver failure).
Qcqp1OracleResult qcqp1_dense_mu(const Qcqp1Problem& prob, long grid_points = 1000000);

/// Straight-line re-implementation of one consensus iteration (z, then x,
/// then u) with naive per-evaluation linear solves and no caching. Contract
/// matches AdmmEngine::step minus the trace.
IterateState reference_step(const QcqpInstance& inst, const IterateState& state,
                            const SolverConfig& config);

struct GlobalSearchResult {
    Eigen::VectorXd x;
    double value = 0.0;
    double resolution = 0.0;
};

/// Grid-plus-zoom search for real-data instances with n <= 2: scans a
/// [-half_width, half_width]^n lattice, then repeatedly re-grids around the
/// best feasible point. Returns nullopt when no grid point is feasible.
std::optional<GlobalSearchResult> small_global_search(const QcqpInstance& inst,
                                                      double half_width = 4.0,
                                                      int grid = 400, int zoom_rounds = 6);

}  // namespace cadmm::oracle
