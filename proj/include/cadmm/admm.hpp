#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cadmm/linalg.hpp"
#include "cadmm/qcqp.hpp"
#include "cadmm/qcqp1.hpp"

namespace cadmm {

/// How the Lagrangian-parameter bound constant C is chosen.
enum class CMode { Fixed, Empirical, Statistical };

enum class StopMode {
    FixedBudget,  ///< always run max_iters iterations (figure-style runs)
    Tolerance,    ///< stop once dx_norm <= tol_dx and consensus <= tol_consensus
};

enum class TerminationReason { MaxIterations, Tolerance, Divergence };

struct SolverConfig {
    double rho = 1.0;
    int max_iters = 1000;
    StopMode stop_mode = StopMode::FixedBudget;
    double tol_dx = 1e-8;
    double tol_consensus = 1e-6;
    CMode c_mode = CMode::Empirical;
    double c_fixed = 1.0;
    double rho_safety = 1.1;
    double qcqp1_tol = 1e-10;
    std::uint64_t seed = 0;  ///< echoed into summaries; the iteration itself is deterministic
    int threads = 1;         ///< cap on the parallel z-update pool
};

/// Primal/auxiliary/dual variables after k iterations.
struct IterateState {
    ComplexVector x;
    std::vector<ComplexVector> z;
    std::vector<ComplexVector> u;  ///< scaled duals
    int k = 0;
};

/// Per-iteration diagnostics, one record per completed iteration.
struct TraceRecord {
    int k = 0;
    double lagrangian = 0.0;            ///< scaled augmented Lagrangian value
    double dx_norm = 0.0;               ///< ||x_k - x_{k-1}||_2
    double consensus_residual = 0.0;    ///< sum_i ||z_i - x||_2
    double dual_identity_residual = 0.0;///< ||rho*sum_i u_i - (A0 x - b0)||_2
    double objective = 0.0;
    double max_z_violation = 0.0;       ///< max_i max(0, g_i(z_i) - c_i)
    double empirical_c_ratio = 0.0;     ///< sum_i ||d_i||^2 / ||sum_i d_i||^2, d_i = u_i^k - u_i^{k-1}
};

struct CEstimate {
    Complex mu_hat{0.0, 0.0};     ///< sample mean of all dual-difference entries
    double sigma2_hat = 0.0;      ///< sample variance of the same pool
    double c_statistical = 1.0;   ///< (sigma^2 + |mu|^2) / (sigma^2 + m |mu|^2)
    double c_empirical_max = 1.0; ///< max over iterations of the recorded ratio
    bool all_zero = false;        ///< every d_i was zero: C is arbitrary, sentinel 1 returned
    std::int64_t samples = 0;
};

/// Streaming accumulator behind estimate_c; the engine feeds it one
/// iteration of dual differences at a time.
class CEstimator {
  public:
    void add_iteration(const std::vector<ComplexVector>& d);
    CEstimate finalize() const;
    int constraint_count() const { return m_; }

  private:
    int m_ = 0;
    std::int64_t count_ = 0;
    Complex mean_{0.0, 0.0};
    double m2_ = 0.0;
    double ratio_max_ = 0.0;
    bool have_ratio_ = false;
    bool any_nonzero_ = false;
};

/// Both C estimators over a recorded trace of dual-difference vectors
/// (outer index: iteration; inner: constraint).
CEstimate estimate_c(const std::vector<std::vector<ComplexVector>>& d_trace);

double select_c(const CEstimate& est, CMode mode, double c_fixed);

struct MonotonicityReport {
    std::vector<int> violation_indices;  ///< positions k with L[k+1] > L[k] + tol*(1+|L[k]|)
    double max_increase = 0.0;           ///< largest raw L[k+1] - L[k], floored at 0
    int checked = 0;                     ///< number of consecutive pairs examined
};

/// Default relative slack for the monotonicity audit; the descent result is
/// exact-arithmetic and floating point needs room.
inline constexpr double kMonotonicityTol = 1e-9;

MonotonicityReport audit_monotonicity(const std::vector<double>& lagrangians,
                                      double tol = kMonotonicityTol);

/// Scaled-form augmented Lagrangian
/// L = x^H A0 x - 2 Re{b0^H x} + rho * sum_i (||z_i - x + u_i||^2 - ||u_i||^2).
double augmented_lagrangian(const QcqpInstance& inst, const IterateState& state, double rho);

/// ||rho * sum_i u_i - (A0 x - b0)||_2. Zero (to rounding) after every
/// iteration because the z-before-x update order makes the dual sum track
/// the objective gradient exactly.
double dual_identity_residual(const QcqpInstance& inst, const IterateState& state, double rho);

/// rho floor below which the x-subproblem loses strong convexity:
/// max(-lambda_min(A0)/m, 0).
double strong_convexity_floor(const QcqpInstance& inst);

/// gamma_x = 2*lambda_min(A0) + 2*m*rho, valid (and positive) only for
/// rho strictly above strong_convexity_floor; otherwise ParameterError.
double strong_convexity_param(const QcqpInstance& inst, double rho);

/// Smallest Lagrangian parameter certifying monotone descent, scaled by a
/// safety factor:
///   safety * max{ -lambda_min/m, (sqrt(m*C)*lambda_max + max(-lambda_min, 0)) / m }
/// with the spectrum taken from A0. Requires C > 0 and safety >= 1.
double recommend_rho(const QcqpInstance& inst, double C, double safety);

struct PilotResult {
    double rho = 0.0;      ///< recommend_rho(c_value, safety)
    double c_value = 1.0;  ///< the C the recommendation was made with
    int rounds = 0;        ///< pilot runs performed
};

/// Chooses rho by short pilot runs. Starting from C = 1, each round runs
/// pilot_iters iterations at the current recommendation and measures C there;
/// while the observed C exceeds the one in use, the recommendation is
/// escalated and re-measured (the empirical ratio depends on the trajectory,
/// so it must be sampled at the rho it certifies). Fixed mode skips the
/// pilots entirely.
PilotResult pilot_rho(const QcqpInstance& inst, CMode mode, double c_fixed, double safety,
                      int pilot_iters = 200, int max_rounds = 4,
                      std::optional<ComplexVector> x0 = {});

struct RunResult {
    IterateState state;
    std::vector<TraceRecord> trace;
    TerminationReason reason = TerminationReason::MaxIterations;
    double initial_lagrangian = 0.0;
    CEstimate c_estimate;
    bool used_default_init = false;  ///< no x0 given and no generator x_feas recorded
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

/// [initial_lagrangian, trace L values...] — the full value sequence.
std::vector<double> lagrangian_sequence(const RunResult& result);

const char* to_string(TerminationReason reason);
const char* to_string(CMode mode);
const char* to_string(StopMode mode);

/// Consensus splitting iteration for a QCQP instance. Updates run in the
/// order z, then x, then u:
///
///   z_i <- argmin ||z - (x - u_i)||^2 s.t. g_i(z) <= c_i   (exact, per constraint)
///   x   <- (A0 + m*rho*I)^{-1} [ b0 + rho * sum_i (z_i + u_i) ]
///   u_i <- u_i + z_i - x
///
/// Construction performs all factorization work once (eigendecomposition of
/// A0 and each A_i, Cholesky of A0 + m*rho*I); step() and run() reuse it.
/// The x-before-z order is deliberately not offered: the dual identity the
/// diagnostics rely on does not hold for it.
class AdmmEngine {
  public:
    AdmmEngine(QcqpInstance inst, SolverConfig config);

    const QcqpInstance& instance() const { return inst_; }
    const SolverConfig& config() const { return cfg_; }
    double lambda_min() const { return a0_eig_.lambda_min(); }
    double lambda_max() const { return a0_eig_.lambda_max(); }

    /// x0 explicitly given, else the generator's recorded feasible point,
    /// else zero. z_i = x0, u_i = 0.
    IterateState initial_state(std::optional<ComplexVector> x0 = {}) const;

    /// One full iteration plus diagnostics evaluated on the new state.
    /// The m projections are independent and run on up to config.threads
    /// workers; every cross-constraint sum is reduced in ascending index
    /// order so results are bit-identical regardless of thread count.
    std::pair<IterateState, TraceRecord> step(const IterateState& state) const;

    /// Iterates from initial_state(x0) until the budget, the tolerance
    /// criterion (in tolerance mode), or divergence detection
    /// (L below L0 - 1e12*(1+|L0|), a non-finite value, or any state norm
    /// above 1e12). Divergence is a flagged outcome, not an error.
    RunResult run(std::optional<ComplexVector> x0 = {}) const;

  private:
    QcqpInstance inst_;
    SolverConfig cfg_;
    EigDecomposition a0_eig_;
    ShiftedPdSolver x_solver_;
    std::vector<Qcqp1Projector> projectors_;

    void update_z(const ComplexVector& x, const std::vector<ComplexVector>& u,
                  std::vector<ComplexVector>& z_new) const;
};

}  // namespace cadmm
