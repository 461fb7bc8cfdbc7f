#include "cadmm/admm.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "cadmm/errors.hpp"

namespace cadmm {

namespace {

constexpr double kDivergenceDrop = 1e12;
constexpr double kDivergenceNorm = 1e12;

void validate_state(const QcqpInstance& inst, const IterateState& state) {
    const auto n = static_cast<Eigen::Index>(inst.n);
    const auto m = static_cast<std::size_t>(inst.m());
    if (state.x.size() != n || state.z.size() != m || state.u.size() != m || state.k < 0) {
        throw ValidationError("iterate state does not match the instance dimensions");
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (state.z[i].size() != n || state.u[i].size() != n) {
            throw ValidationError("iterate state vector " + std::to_string(i) +
                                  " has wrong length");
        }
    }
}

SolverConfig validate_config(SolverConfig cfg) {
    if (!(cfg.rho > 0.0)) throw ParameterError("rho must be positive");
    if (cfg.max_iters < 1) throw ParameterError("max_iters must be at least 1");
    if (cfg.tol_dx < 0.0 || cfg.tol_consensus < 0.0) {
        throw ParameterError("stopping tolerances must be nonnegative");
    }
    if (!(cfg.qcqp1_tol > 0.0)) throw ParameterError("qcqp1_tol must be positive");
    if (!(cfg.rho_safety >= 1.0)) throw ParameterError("rho_safety must be at least 1");
    if (cfg.c_mode == CMode::Fixed && !(cfg.c_fixed > 0.0)) {
        throw ParameterError("fixed C must be positive");
    }
    if (cfg.threads < 1) throw ParameterError("threads must be at least 1");
    return cfg;
}

ShiftedPdSolver make_x_solver(const QcqpInstance& inst, const SolverConfig& cfg,
                              const EigDecomposition& a0_eig) {
    const double floor = std::max(-a0_eig.lambda_min() / inst.m(), 0.0);
    if (!(cfg.rho > floor)) {
        throw ParameterError("rho = " + std::to_string(cfg.rho) +
                             " must exceed max(-lambda_min(A0)/m, 0) = " + std::to_string(floor) +
                             " to keep A0 + m*rho*I positive definite");
    }
    return ShiftedPdSolver(inst.A0, inst.m() * cfg.rho);
}

std::vector<Qcqp1Projector> make_projectors(const QcqpInstance& inst) {
    std::vector<Qcqp1Projector> out;
    out.reserve(static_cast<std::size_t>(inst.m()));
    for (const auto& con : inst.constraints) {
        out.emplace_back(con.A, con.b, con.c);
    }
    return out;
}

}  // namespace

void CEstimator::add_iteration(const std::vector<ComplexVector>& d) {
    if (d.empty()) throw ParameterError("dual-difference record must hold at least one vector");
    if (m_ == 0) {
        m_ = static_cast<int>(d.size());
    } else if (m_ != static_cast<int>(d.size())) {
        throw ParameterError("dual-difference records must all have the same constraint count");
    }
    double num = 0.0;
    ComplexVector sum = ComplexVector::Zero(d.front().size());
    for (const auto& di : d) {
        if (di.size() != sum.size()) {
            throw ParameterError("dual-difference vectors must share one dimension");
        }
        num += di.squaredNorm();
        sum += di;
        for (Eigen::Index j = 0; j < di.size(); ++j) {
            const Complex entry = di(j);
            ++count_;
            const Complex delta = entry - mean_;
            mean_ += delta / static_cast<double>(count_);
            const Complex delta2 = entry - mean_;
            m2_ += (std::conj(delta) * delta2).real();
        }
    }
    if (num > 0.0) any_nonzero_ = true;
    const double den = sum.squaredNorm();
    if (den > 0.0) {
        ratio_max_ = std::max(ratio_max_, num / den);
        have_ratio_ = true;
    }
}

CEstimate CEstimator::finalize() const {
    CEstimate est;
    est.samples = count_;
    est.mu_hat = mean_;
    est.sigma2_hat = count_ > 0 ? std::max(0.0, m2_ / static_cast<double>(count_)) : 0.0;
    if (count_ == 0 || !any_nonzero_) {
        est.all_zero = true;
        est.c_statistical = 1.0;
        est.c_empirical_max = 1.0;
        return est;
    }
    const double mu2 = std::norm(est.mu_hat);
    const double num = est.sigma2_hat + mu2;
    const double den = est.sigma2_hat + static_cast<double>(m_) * mu2;
    est.c_statistical = den > 0.0 ? num / den : 1.0;
    est.c_empirical_max = have_ratio_ ? ratio_max_ : 1.0;
    return est;
}

CEstimate estimate_c(const std::vector<std::vector<ComplexVector>>& d_trace) {
    if (d_trace.empty()) {
        throw ParameterError("estimate_c needs at least one iteration of dual differences");
    }
    CEstimator acc;
    for (const auto& d : d_trace) acc.add_iteration(d);
    return acc.finalize();
}

double select_c(const CEstimate& est, CMode mode, double c_fixed) {
    switch (mode) {
        case CMode::Fixed:
            if (!(c_fixed > 0.0)) throw ParameterError("fixed C must be positive");
            return c_fixed;
        case CMode::Empirical: return est.c_empirical_max;
        case CMode::Statistical: return est.c_statistical;
    }
    throw ParameterError("unknown C mode");
}

MonotonicityReport audit_monotonicity(const std::vector<double>& lagrangians, double tol) {
    if (lagrangians.size() < 2) {
        throw ParameterError("monotonicity audit needs at least two Lagrangian values");
    }
    MonotonicityReport report;
    report.checked = static_cast<int>(lagrangians.size()) - 1;
    for (std::size_t k = 0; k + 1 < lagrangians.size(); ++k) {
        const double increase = lagrangians[k + 1] - lagrangians[k];
        report.max_increase = std::max(report.max_increase, increase);
        if (lagrangians[k + 1] > lagrangians[k] + tol * (1.0 + std::abs(lagrangians[k]))) {
            report.violation_indices.push_back(static_cast<int>(k));
        }
    }
    report.max_increase = std::max(report.max_increase, 0.0);
    return report;
}

double augmented_lagrangian(const QcqpInstance& inst, const IterateState& state, double rho) {
    validate_state(inst, state);
    double penalty = 0.0;
    for (std::size_t i = 0; i < state.z.size(); ++i) {
        penalty += (state.z[i] - state.x + state.u[i]).squaredNorm() - state.u[i].squaredNorm();
    }
    return objective(inst, state.x) + rho * penalty;
}

double dual_identity_residual(const QcqpInstance& inst, const IterateState& state, double rho) {
    validate_state(inst, state);
    ComplexVector sum_u = ComplexVector::Zero(state.x.size());
    for (const auto& ui : state.u) sum_u += ui;
    return (rho * sum_u - (inst.A0 * state.x - inst.b0)).norm();
}

double strong_convexity_floor(const QcqpInstance& inst) {
    const EigDecomposition eig = eig_hermitian(inst.A0);
    return std::max(-eig.lambda_min() / inst.m(), 0.0);
}

double strong_convexity_param(const QcqpInstance& inst, double rho) {
    const EigDecomposition eig = eig_hermitian(inst.A0);
    const double floor = std::max(-eig.lambda_min() / inst.m(), 0.0);
    if (!(rho > floor)) {
        throw ParameterError("rho = " + std::to_string(rho) +
                             " is not above the strong-convexity floor max(-lambda_min(A0)/m, 0) = " +
                             std::to_string(floor));
    }
    const double gamma = 2.0 * eig.lambda_min() + 2.0 * inst.m() * rho;
    if (!(gamma > 0.0)) {
        throw ParameterError("strong-convexity parameter came out nonpositive");
    }
    return gamma;
}

double recommend_rho(const QcqpInstance& inst, double C, double safety) {
    if (!(C > 0.0)) throw ParameterError("C must be positive");
    if (!(safety >= 1.0)) throw ParameterError("safety factor must be at least 1");
    const EigDecomposition eig = eig_hermitian(inst.A0);
    const double m = static_cast<double>(inst.m());
    const double term_floor = -eig.lambda_min() / m;
    const double term_descent =
        (std::sqrt(m * C) * eig.lambda_max() + std::max(-eig.lambda_min(), 0.0)) / m;
    const double bound = std::max(term_floor, term_descent);
    // bound is zero only for A0 == 0, where every positive rho descends.
    if (!(bound > 0.0)) return safety;
    return safety * bound;
}

PilotResult pilot_rho(const QcqpInstance& inst, CMode mode, double c_fixed, double safety,
                      int pilot_iters, int max_rounds, std::optional<ComplexVector> x0) {
    PilotResult result;
    if (mode == CMode::Fixed) {
        result.c_value = c_fixed;
        result.rho = recommend_rho(inst, c_fixed, safety);
        return result;
    }
    if (pilot_iters < 1 || max_rounds < 1) {
        throw ParameterError("pilot needs at least one iteration and one round");
    }
    result.c_value = 1.0;
    result.rho = recommend_rho(inst, result.c_value, safety);
    for (int round = 0; round < max_rounds; ++round) {
        SolverConfig cfg;
        cfg.rho = result.rho;
        cfg.max_iters = pilot_iters;
        const RunResult pilot = AdmmEngine(inst, cfg).run(x0);
        const double c_obs = select_c(pilot.c_estimate, mode, c_fixed);
        ++result.rounds;
        if (!(c_obs > result.c_value)) break;
        result.c_value = c_obs;
        result.rho = recommend_rho(inst, result.c_value, safety);
    }
    return result;
}

std::vector<double> lagrangian_sequence(const RunResult& result) {
    std::vector<double> values;
    values.reserve(result.trace.size() + 1);
    values.push_back(result.initial_lagrangian);
    for (const auto& rec : result.trace) values.push_back(rec.lagrangian);
    return values;
}

const char* to_string(TerminationReason reason) {
    switch (reason) {
        case TerminationReason::MaxIterations: return "max_iterations";
        case TerminationReason::Tolerance: return "tolerance";
        case TerminationReason::Divergence: return "divergence";
    }
    return "unknown";
}

const char* to_string(CMode mode) {
    switch (mode) {
        case CMode::Fixed: return "fixed";
        case CMode::Empirical: return "empirical";
        case CMode::Statistical: return "statistical";
    }
    return "unknown";
}

const char* to_string(StopMode mode) {
    switch (mode) {
        case StopMode::FixedBudget: return "fixed_budget";
        case StopMode::Tolerance: return "tolerance";
    }
    return "unknown";
}

AdmmEngine::AdmmEngine(QcqpInstance inst, SolverConfig config)
    : inst_(std::move(inst)),
      cfg_(validate_config(std::move(config))),
      a0_eig_(eig_hermitian(inst_.A0)),
      x_solver_(make_x_solver(inst_, cfg_, a0_eig_)),
      projectors_(make_projectors(inst_)) {}

IterateState AdmmEngine::initial_state(std::optional<ComplexVector> x0) const {
    const auto n = static_cast<Eigen::Index>(inst_.n);
    IterateState state;
    if (x0) {
        if (x0->size() != n) throw ValidationError("x0 has the wrong length");
        validate_finite(*x0, "x0");
        state.x = std::move(*x0);
    } else if (inst_.meta.x_feas) {
        state.x = *inst_.meta.x_feas;
    } else {
        state.x = ComplexVector::Zero(n);
    }
    state.z.assign(static_cast<std::size_t>(inst_.m()), state.x);
    state.u.assign(static_cast<std::size_t>(inst_.m()), ComplexVector::Zero(n));
    state.k = 0;
    return state;
}

void AdmmEngine::update_z(const ComplexVector& x, const std::vector<ComplexVector>& u,
                          std::vector<ComplexVector>& z_new) const {
    const int m = inst_.m();
    z_new.resize(static_cast<std::size_t>(m));
    auto solve_one = [&](int i) {
        const auto idx = static_cast<std::size_t>(i);
        z_new[idx] = projectors_[idx].project(x - u[idx], cfg_.qcqp1_tol).z;
    };
    const int workers = std::max(1, std::min(cfg_.threads, m));
    if (workers == 1) {
        for (int i = 0; i < m; ++i) solve_one(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (int i = next.fetch_add(1); i < m; i = next.fetch_add(1)) solve_one(i);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
}

std::pair<IterateState, TraceRecord> AdmmEngine::step(const IterateState& state) const {
    validate_state(inst_, state);
    const auto n = static_cast<Eigen::Index>(inst_.n);
    const auto m = static_cast<std::size_t>(inst_.m());
    const double rho = cfg_.rho;

    IterateState next;
    next.k = state.k + 1;
    update_z(state.x, state.u, next.z);

    // All index-i reductions run in ascending order for bit determinism.
    ComplexVector sum_zu = ComplexVector::Zero(n);
    for (std::size_t i = 0; i < m; ++i) sum_zu += next.z[i] + state.u[i];
    next.x = x_solver_.solve(inst_.b0 + rho * sum_zu);

    next.u.resize(m);
    for (std::size_t i = 0; i < m; ++i) next.u[i] = state.u[i] + next.z[i] - next.x;

    TraceRecord rec;
    rec.k = next.k;
    rec.lagrangian = augmented_lagrangian(inst_, next, rho);
    rec.dx_norm = (next.x - state.x).norm();
    double consensus = 0.0;
    for (std::size_t i = 0; i < m; ++i) consensus += (next.z[i] - next.x).norm();
    rec.consensus_residual = consensus;
    rec.dual_identity_residual = dual_identity_residual(inst_, next, rho);
    rec.objective = objective(inst_, next.x);
    double max_violation = 0.0;
    for (int i = 0; i < inst_.m(); ++i) {
        const auto& con = inst_.constraints[static_cast<std::size_t>(i)];
        max_violation = std::max(max_violation,
                                 quad_form(con.A, con.b, next.z[static_cast<std::size_t>(i)]) -
                                     con.c);
    }
    rec.max_z_violation = std::max(0.0, max_violation);
    double d_num = 0.0;
    ComplexVector d_sum = ComplexVector::Zero(n);
    for (std::size_t i = 0; i < m; ++i) {
        const ComplexVector di = next.u[i] - state.u[i];
        d_num += di.squaredNorm();
        d_sum += di;
    }
    const double d_den = d_sum.squaredNorm();
    rec.empirical_c_ratio =
        d_num == 0.0 ? 0.0
                     : (d_den > 0.0 ? d_num / d_den : std::numeric_limits<double>::infinity());
    return {std::move(next), rec};
}

RunResult AdmmEngine::run(std::optional<ComplexVector> x0) const {
    RunResult result;
    result.used_default_init = !x0.has_value() && !inst_.meta.x_feas.has_value();
    IterateState state = initial_state(std::move(x0));
    result.initial_lagrangian = augmented_lagrangian(inst_, state, cfg_.rho);
    result.lambda_min = a0_eig_.lambda_min();
    result.lambda_max = a0_eig_.lambda_max();
    result.trace.reserve(static_cast<std::size_t>(cfg_.max_iters));
    result.reason = TerminationReason::MaxIterations;

    CEstimator c_acc;
    std::vector<ComplexVector> d(static_cast<std::size_t>(inst_.m()));
    const double divergence_floor =
        result.initial_lagrangian - kDivergenceDrop * (1.0 + std::abs(result.initial_lagrangian));

    for (int k = 1; k <= cfg_.max_iters; ++k) {
        auto [next, rec] = step(state);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = next.u[i] - state.u[i];
        state = std::move(next);
        result.trace.push_back(rec);

        double state_norm = state.x.norm();
        for (const auto& zi : state.z) state_norm = std::max(state_norm, zi.norm());
        for (const auto& ui : state.u) state_norm = std::max(state_norm, ui.norm());
        const bool diverged = !std::isfinite(rec.lagrangian) || rec.lagrangian < divergence_floor ||
                              state_norm > kDivergenceNorm;
        if (diverged) {
            // Keep the estimator pool to the healthy prefix.
            result.reason = TerminationReason::Divergence;
            break;
        }
        c_acc.add_iteration(d);
        if (cfg_.stop_mode == StopMode::Tolerance && rec.dx_norm <= cfg_.tol_dx &&
            rec.consensus_residual <= cfg_.tol_consensus) {
            result.reason = TerminationReason::Tolerance;
            break;
        }
    }
    result.state = std::move(state);
    result.c_estimate = c_acc.finalize();
    return result;
}

}  // namespace cadmm
