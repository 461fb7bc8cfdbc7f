#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cadmm/admm.hpp"
#include "cadmm/errors.hpp"
#include "cadmm/generator.hpp"
#include "cadmm/qcqp.hpp"
#include "cadmm/qcqp1.hpp"
#include "cadmm/trace_io.hpp"

namespace py = pybind11;
using namespace cadmm;

namespace {

Eigen::MatrixXd trace_matrix(const RunResult& result) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(result.trace.size()), 8);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        const TraceRecord& rec = result.trace[static_cast<std::size_t>(r)];
        out(r, 0) = rec.k;
        out(r, 1) = rec.lagrangian;
        out(r, 2) = rec.dx_norm;
        out(r, 3) = rec.consensus_residual;
        out(r, 4) = rec.dual_identity_residual;
        out(r, 5) = rec.objective;
        out(r, 6) = rec.max_z_violation;
        out(r, 7) = rec.empirical_c_ratio;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Consensus splitting solver for complex QCQPs";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<NotPositiveDefiniteError>(m, "NotPositiveDefiniteError",
                                                     PyExc_ValueError);
    py::register_exception<InfeasibleSubproblemError>(m, "InfeasibleSubproblemError",
                                                      PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<QcqpConstraint>(m, "QcqpConstraint")
        .def(py::init<>())
        .def(py::init([](const ComplexMatrix& A, const ComplexVector& b, double c) {
                 return QcqpConstraint{A, b, c};
             }),
             py::arg("A"), py::arg("b"), py::arg("c"))
        .def_readwrite("A", &QcqpConstraint::A)
        .def_readwrite("b", &QcqpConstraint::b)
        .def_readwrite("c", &QcqpConstraint::c);

    py::class_<QcqpInstance>(m, "QcqpInstance")
        .def_readonly("n", &QcqpInstance::n)
        .def_property_readonly("m", &QcqpInstance::m)
        .def_readonly("A0", &QcqpInstance::A0)
        .def_readonly("b0", &QcqpInstance::b0)
        .def_readonly("constraints", &QcqpInstance::constraints)
        .def_property_readonly("seed",
                               [](const QcqpInstance& inst) { return inst.meta.seed; })
        .def_property_readonly("x_feas",
                               [](const QcqpInstance& inst) { return inst.meta.x_feas; })
        .def_property_readonly("pd_shift",
                               [](const QcqpInstance& inst) { return inst.meta.pd_shift; })
        .def("to_json", [](const QcqpInstance& inst) { return instance_to_json(inst); })
        .def("__repr__", [](const QcqpInstance& inst) {
            return "QcqpInstance(n=" + std::to_string(inst.n) +
                   ", m=" + std::to_string(inst.m()) + ")";
        });

    m.def(
        "make_instance",
        [](const ComplexMatrix& A0, const ComplexVector& b0,
           const std::vector<QcqpConstraint>& constraints) {
            return make_instance(A0, b0, constraints);
        },
        py::arg("A0"), py::arg("b0"), py::arg("constraints"));
    m.def(
        "generate",
        [](int n, int m_, bool pd_a0, std::uint64_t seed) {
            return generate({n, m_, pd_a0, seed}).instance;
        },
        py::arg("n") = 10, py::arg("m") = 5, py::arg("pd_a0") = false, py::arg("seed") = 0,
        "Seeded random instance; the feasible point is recorded as .x_feas");
    m.def("load_instance", &load_instance, py::arg("path"));
    m.def("save_instance", &save_instance, py::arg("instance"), py::arg("path"));
    m.def("instance_from_json", &instance_from_json, py::arg("text"));

    m.def("objective", &objective, py::arg("instance"), py::arg("x"));
    m.def("constraint_value", &constraint_value, py::arg("instance"), py::arg("i"),
          py::arg("x"));
    m.def("quad_form", &quad_form, py::arg("A"), py::arg("b"), py::arg("x"));

    py::class_<FeasibilityReport>(m, "FeasibilityReport")
        .def_readonly("feasible", &FeasibilityReport::feasible)
        .def_readonly("slack", &FeasibilityReport::slack)
        .def_readonly("worst_violation", &FeasibilityReport::worst_violation);
    m.def("check_feasible", &check_feasible, py::arg("instance"), py::arg("x"),
          py::arg("tol") = kFeasibilityTol);
    m.def("expand_equality", &expand_equality, py::arg("A"), py::arg("b"), py::arg("c"));

    py::class_<EigDecomposition>(m, "EigDecomposition")
        .def_readonly("eigenvalues", &EigDecomposition::eigenvalues)
        .def_readonly("basis", &EigDecomposition::basis)
        .def_property_readonly("lambda_min", &EigDecomposition::lambda_min)
        .def_property_readonly("lambda_max", &EigDecomposition::lambda_max);
    m.def("eig_hermitian", &eig_hermitian, py::arg("A"));
    m.def("solve_shifted_pd", &solve_shifted_pd, py::arg("A"), py::arg("shift"),
          py::arg("rhs"));

    py::class_<Qcqp1Solution>(m, "Qcqp1Solution")
        .def_readonly("z", &Qcqp1Solution::z)
        .def_readonly("multiplier", &Qcqp1Solution::multiplier)
        .def_readonly("active", &Qcqp1Solution::active)
        .def_readonly("bisection_iters", &Qcqp1Solution::bisection_iters)
        .def_readonly("hard_case", &Qcqp1Solution::hard_case);
    m.def(
        "project_qcqp1",
        [](const ComplexMatrix& A, const ComplexVector& b, double c, const ComplexVector& v,
           double tol) { return project_qcqp1({A, b, c, v}, tol); },
        py::arg("A"), py::arg("b"), py::arg("c"), py::arg("v"), py::arg("tol") = 1e-10,
        "Exact minimizer of ||z - v||^2 subject to z^H A z - 2 Re{b^H z} <= c");

    py::enum_<CMode>(m, "CMode")
        .value("Fixed", CMode::Fixed)
        .value("Empirical", CMode::Empirical)
        .value("Statistical", CMode::Statistical);
    py::enum_<StopMode>(m, "StopMode")
        .value("FixedBudget", StopMode::FixedBudget)
        .value("Tolerance", StopMode::Tolerance);
    py::enum_<TerminationReason>(m, "TerminationReason")
        .value("MaxIterations", TerminationReason::MaxIterations)
        .value("Tolerance", TerminationReason::Tolerance)
        .value("Divergence", TerminationReason::Divergence);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("rho", &SolverConfig::rho)
        .def_readwrite("max_iters", &SolverConfig::max_iters)
        .def_readwrite("stop_mode", &SolverConfig::stop_mode)
        .def_readwrite("tol_dx", &SolverConfig::tol_dx)
        .def_readwrite("tol_consensus", &SolverConfig::tol_consensus)
        .def_readwrite("c_mode", &SolverConfig::c_mode)
        .def_readwrite("c_fixed", &SolverConfig::c_fixed)
        .def_readwrite("rho_safety", &SolverConfig::rho_safety)
        .def_readwrite("qcqp1_tol", &SolverConfig::qcqp1_tol)
        .def_readwrite("seed", &SolverConfig::seed)
        .def_readwrite("threads", &SolverConfig::threads);

    py::class_<IterateState>(m, "IterateState")
        .def_readonly("x", &IterateState::x)
        .def_readonly("z", &IterateState::z)
        .def_readonly("u", &IterateState::u)
        .def_readonly("k", &IterateState::k);

    py::class_<TraceRecord>(m, "TraceRecord")
        .def_readonly("k", &TraceRecord::k)
        .def_readonly("lagrangian", &TraceRecord::lagrangian)
        .def_readonly("dx_norm", &TraceRecord::dx_norm)
        .def_readonly("consensus_residual", &TraceRecord::consensus_residual)
        .def_readonly("dual_identity_residual", &TraceRecord::dual_identity_residual)
        .def_readonly("objective", &TraceRecord::objective)
        .def_readonly("max_z_violation", &TraceRecord::max_z_violation)
        .def_readonly("empirical_c_ratio", &TraceRecord::empirical_c_ratio);

    py::class_<CEstimate>(m, "CEstimate")
        .def_readonly("mu_hat", &CEstimate::mu_hat)
        .def_readonly("sigma2_hat", &CEstimate::sigma2_hat)
        .def_readonly("c_statistical", &CEstimate::c_statistical)
        .def_readonly("c_empirical_max", &CEstimate::c_empirical_max)
        .def_readonly("all_zero", &CEstimate::all_zero)
        .def_readonly("samples", &CEstimate::samples);

    py::class_<MonotonicityReport>(m, "MonotonicityReport")
        .def_readonly("violation_indices", &MonotonicityReport::violation_indices)
        .def_readonly("max_increase", &MonotonicityReport::max_increase)
        .def_readonly("checked", &MonotonicityReport::checked);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("state", &RunResult::state)
        .def_readonly("trace", &RunResult::trace)
        .def_readonly("reason", &RunResult::reason)
        .def_readonly("initial_lagrangian", &RunResult::initial_lagrangian)
        .def_readonly("c_estimate", &RunResult::c_estimate)
        .def_readonly("used_default_init", &RunResult::used_default_init)
        .def_readonly("lambda_min", &RunResult::lambda_min)
        .def_readonly("lambda_max", &RunResult::lambda_max)
        .def("trace_matrix", &trace_matrix,
             "iterations x 8 array; columns follow TRACE_COLUMNS")
        .def("lagrangians", &lagrangian_sequence,
             "initial value followed by the per-iteration values");
    m.attr("TRACE_COLUMNS") =
        py::make_tuple("k", "L", "dx_norm", "consensus_residual", "dual_identity_residual",
                       "objective", "max_z_violation", "empirical_C_ratio");

    py::class_<AdmmEngine>(m, "AdmmEngine")
        .def(py::init<QcqpInstance, SolverConfig>(), py::arg("instance"), py::arg("config"))
        .def_property_readonly("lambda_min", &AdmmEngine::lambda_min)
        .def_property_readonly("lambda_max", &AdmmEngine::lambda_max)
        .def("initial_state", &AdmmEngine::initial_state,
             py::arg("x0") = std::optional<ComplexVector>{})
        .def("step", &AdmmEngine::step, py::arg("state"))
        .def("run", &AdmmEngine::run, py::arg("x0") = std::optional<ComplexVector>{},
             py::call_guard<py::gil_scoped_release>());
    m.def(
        "solve",
        [](const QcqpInstance& inst, const SolverConfig& config,
           std::optional<ComplexVector> x0) {
            py::gil_scoped_release release;
            return AdmmEngine(inst, config).run(std::move(x0));
        },
        py::arg("instance"), py::arg("config"),
        py::arg("x0") = std::optional<ComplexVector>{});

    m.def("augmented_lagrangian", &augmented_lagrangian, py::arg("instance"),
          py::arg("state"), py::arg("rho"));
    m.def("dual_identity_residual", &dual_identity_residual, py::arg("instance"),
          py::arg("state"), py::arg("rho"));
    m.def("strong_convexity_param", &strong_convexity_param, py::arg("instance"),
          py::arg("rho"));
    m.def("strong_convexity_floor", &strong_convexity_floor, py::arg("instance"));
    m.def("recommend_rho", &recommend_rho, py::arg("instance"), py::arg("C"),
          py::arg("safety"));

    py::class_<PilotResult>(m, "PilotResult")
        .def_readonly("rho", &PilotResult::rho)
        .def_readonly("c_value", &PilotResult::c_value)
        .def_readonly("rounds", &PilotResult::rounds);
    m.def("pilot_rho", &pilot_rho, py::arg("instance"), py::arg("mode"),
          py::arg("c_fixed") = 1.0, py::arg("safety") = 1.1, py::arg("pilot_iters") = 200,
          py::arg("max_rounds") = 4, py::arg("x0") = std::optional<ComplexVector>{},
          py::call_guard<py::gil_scoped_release>());

    m.def("estimate_c", &estimate_c, py::arg("d_trace"));
    m.def("audit_monotonicity", &audit_monotonicity, py::arg("lagrangians"),
          py::arg("tol") = kMonotonicityTol);

    m.def("write_trace_csv", &write_trace_csv, py::arg("trace"), py::arg("path"));
    m.def("read_trace_csv", &read_trace_csv, py::arg("path"));
    m.def("summary_json", &summary_to_json, py::arg("instance"), py::arg("config"),
          py::arg("result"), py::arg("indent") = 2);
}
