#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "cadmm/admm.hpp"
#include "cadmm/errors.hpp"
#include "cadmm/generator.hpp"
#include "cadmm/qcqp.hpp"
#include "cadmm/trace_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Exit codes: 0 success, 2 divergence flag, 3 parameter error,
// 4 I/O or parse error, 5 audit failure.
constexpr int kExitOk = 0;
constexpr int kExitDivergence = 2;
constexpr int kExitParameter = 3;
constexpr int kExitIo = 4;
constexpr int kExitAudit = 5;

struct CModeSpec {
    cadmm::CMode mode = cadmm::CMode::Empirical;
    double fixed_value = 1.0;
};

CModeSpec parse_c_mode(const std::string& text) {
    CModeSpec spec;
    if (text == "empirical") {
        spec.mode = cadmm::CMode::Empirical;
    } else if (text == "statistical") {
        spec.mode = cadmm::CMode::Statistical;
    } else if (text.rfind("fixed:", 0) == 0) {
        spec.mode = cadmm::CMode::Fixed;
        try {
            spec.fixed_value = std::stod(text.substr(6));
        } catch (const std::exception&) {
            throw cadmm::ParameterError("cannot parse fixed C value in --c-mode " + text);
        }
        if (!(spec.fixed_value > 0.0)) {
            throw cadmm::ParameterError("fixed C must be positive");
        }
    } else {
        throw cadmm::ParameterError(
            "--c-mode must be empirical, statistical, or fixed:<value>");
    }
    return spec;
}

int cmd_generate(int n, int m, bool pd_a0, std::uint64_t seed, const std::string& out) {
    const cadmm::GeneratedInstance gen = cadmm::generate({n, m, pd_a0, seed});
    cadmm::save_instance(gen.instance, out);
    const cadmm::EigDecomposition eig = cadmm::eig_hermitian(gen.instance.A0);
    const cadmm::FeasibilityReport feas = cadmm::check_feasible(gen.instance, gen.x_feas);
    std::printf("wrote %s (n = %d, m = %d, seed = %llu)\n", out.c_str(), n, m,
                static_cast<unsigned long long>(seed));
    std::printf("lambda_min(A0) = %.6g, lambda_max(A0) = %.6g%s\n", eig.lambda_min(),
                eig.lambda_max(), pd_a0 ? " (definite shift applied)" : "");
    std::printf("feasibility margin at x_feas: min = %.6g, max = %.6g\n",
                feas.slack.minCoeff(), feas.slack.maxCoeff());
    return kExitOk;
}

struct SolveArgs {
    std::string instance_path;
    double rho = 0.0;
    bool auto_rho = false;
    std::string c_mode = "empirical";
    int iters = 1000;
    double tol_dx = -1.0;
    double tol_consensus = -1.0;
    std::string trace_path;
    std::string summary_path;
    int threads = 1;
    double rho_safety = 1.1;
    double qcqp1_tol = 1e-10;
    std::string x0 = "feas";
    int pilot_iters = 200;
};

int cmd_solve(const SolveArgs& args) {
    const cadmm::QcqpInstance inst = cadmm::load_instance(args.instance_path);
    const CModeSpec cspec = parse_c_mode(args.c_mode);

    cadmm::SolverConfig cfg;
    cfg.max_iters = args.iters;
    cfg.threads = args.threads;
    cfg.rho_safety = args.rho_safety;
    cfg.qcqp1_tol = args.qcqp1_tol;
    cfg.c_mode = cspec.mode;
    cfg.c_fixed = cspec.fixed_value;
    cfg.seed = inst.meta.seed.value_or(0);
    if (args.tol_dx >= 0.0 || args.tol_consensus >= 0.0) {
        cfg.stop_mode = cadmm::StopMode::Tolerance;
        if (args.tol_dx >= 0.0) cfg.tol_dx = args.tol_dx;
        if (args.tol_consensus >= 0.0) cfg.tol_consensus = args.tol_consensus;
    }

    if (args.auto_rho == (args.rho > 0.0)) {
        throw cadmm::ParameterError("pass exactly one of --rho <value> or --auto-rho");
    }
    if (args.auto_rho) {
        const cadmm::PilotResult pilot = cadmm::pilot_rho(
            inst, cspec.mode, cspec.fixed_value, cfg.rho_safety, args.pilot_iters);
        cfg.rho = pilot.rho;
        std::printf("auto rho: %s C = %.6g after %d pilot round(s), rho = %.6g\n",
                    cadmm::to_string(cspec.mode), pilot.c_value, pilot.rounds, cfg.rho);
    } else {
        cfg.rho = args.rho;
    }

    std::optional<cadmm::ComplexVector> x0;
    if (args.x0 == "zero") {
        x0 = cadmm::ComplexVector::Zero(inst.n);
    } else if (args.x0 != "feas") {
        throw cadmm::ParameterError("--x0 must be 'feas' or 'zero'");
    }

    const cadmm::AdmmEngine engine(inst, cfg);
    const cadmm::RunResult result = engine.run(x0);
    if (result.used_default_init) {
        std::printf("note: no recorded feasible point; starting from x0 = 0\n");
    }
    if (!args.trace_path.empty()) cadmm::write_trace_csv(result.trace, args.trace_path);
    if (!args.summary_path.empty()) {
        std::ofstream out(args.summary_path);
        if (!out) throw cadmm::IoError("cannot open " + args.summary_path + " for writing");
        out << cadmm::summary_to_json(inst, cfg, result) << "\n";
    }
    std::printf("termination: %s after %zu iterations (rho = %.6g)\n",
                cadmm::to_string(result.reason), result.trace.size(), cfg.rho);
    if (!result.trace.empty()) {
        std::printf("L: %.10g -> %.10g, final dx = %.3g, consensus = %.3g\n",
                    result.initial_lagrangian, result.trace.back().lagrangian,
                    result.trace.back().dx_norm, result.trace.back().consensus_residual);
    }
    return result.reason == cadmm::TerminationReason::Divergence ? kExitDivergence : kExitOk;
}

struct ReplicateArgs {
    std::string figure;
    std::string outdir;
    int iters = 1000;
    std::uint64_t seed = 1;
    int seeds = 20;
    std::vector<std::uint64_t> seed_list;  // overrides seed/seeds for fig3
    int n = 10;
    int m = 5;
    double rho = 0.0;  // 0: per-figure default
    std::vector<double> rho_list{2.0, 5.0, 10.0, 20.0};
    std::vector<int> m_list{2, 5, 10, 20};
    int threads = 1;
};

cadmm::RunResult run_generated(int n, int m, bool pd, std::uint64_t seed, double rho,
                               int iters, int threads) {
    const cadmm::GeneratedInstance gen = cadmm::generate({n, m, pd, seed});
    cadmm::SolverConfig cfg;
    cfg.rho = rho;
    cfg.max_iters = iters;
    cfg.threads = threads;
    cfg.seed = seed;
    return cadmm::AdmmEngine(gen.instance, cfg).run();
}

int cmd_replicate(const ReplicateArgs& args) {
    fs::create_directories(args.outdir);
    auto out_path = [&](const std::string& name) {
        return (fs::path(args.outdir) / name).string();
    };
    auto emit = [&](const cadmm::RunResult& result, const std::string& name) {
        cadmm::write_trace_csv(result.trace, out_path(name));
        std::printf("%-28s L0 = %.6g, L_end = %.6g, %s\n", name.c_str(),
                    result.initial_lagrangian,
                    result.trace.empty() ? result.initial_lagrangian
                                         : result.trace.back().lagrangian,
                    cadmm::to_string(result.reason));
    };

    if (args.figure == "fig1") {
        const double rho = args.rho > 0.0 ? args.rho : 10.0;
        emit(run_generated(args.n, args.m, false, args.seed, rho, args.iters, args.threads),
             "fig1_indefinite.csv");
    } else if (args.figure == "fig2") {
        for (const double rho : args.rho_list) {
            char name[64];
            std::snprintf(name, sizeof(name), "fig2_rho%g.csv", rho);
            emit(run_generated(args.n, args.m, true, args.seed, rho, args.iters, args.threads),
                 name);
        }
    } else if (args.figure == "fig3") {
        const double rho = args.rho > 0.0 ? args.rho : 10.0;
        std::vector<std::uint64_t> seeds = args.seed_list;
        if (seeds.empty()) {
            for (int s = 0; s < args.seeds; ++s) seeds.push_back(args.seed + s);
        }
        for (const std::uint64_t s : seeds) {
            char name[64];
            std::snprintf(name, sizeof(name), "fig3_seed%llu.csv",
                          static_cast<unsigned long long>(s));
            emit(run_generated(args.n, args.m, true, s, rho, args.iters, args.threads),
                 name);
        }
    } else if (args.figure == "fig4") {
        const double rho = args.rho > 0.0 ? args.rho : 20.0;
        for (const int m : args.m_list) {
            char name[64];
            std::snprintf(name, sizeof(name), "fig4_m%d.csv", m);
            emit(run_generated(args.n, m, true, args.seed, rho, args.iters, args.threads),
                 name);
        }
    } else if (args.figure == "fig5") {
        const double rho = args.rho > 0.0 ? args.rho : 10.0;
        emit(run_generated(args.n, args.m, true, args.seed, rho, args.iters, args.threads),
             "fig5_distance.csv");
    } else {
        throw cadmm::ParameterError("--figure must be one of fig1..fig5");
    }
    return kExitOk;
}

struct CheckArgs {
    std::string trace_path;
    std::string instance_path;
    bool rerun = false;
    double rho = 10.0;
    int iters = 1000;
    int threads = 1;
    double tol_mono = cadmm::kMonotonicityTol;
    double max_dual = 1e-6;
    double max_zviol = 1e-8;
    std::string json_path;
};

int cmd_check(const CheckArgs& args) {
    std::vector<cadmm::TraceRecord> trace;
    if (!args.trace_path.empty()) {
        trace = cadmm::read_trace_csv(args.trace_path);
    } else if (!args.instance_path.empty() && args.rerun) {
        const cadmm::QcqpInstance inst = cadmm::load_instance(args.instance_path);
        cadmm::SolverConfig cfg;
        cfg.rho = args.rho;
        cfg.max_iters = args.iters;
        cfg.threads = args.threads;
        trace = cadmm::AdmmEngine(inst, cfg).run().trace;
    } else {
        throw cadmm::ParameterError("pass --trace <csv>, or --instance <json> with --rerun");
    }
    if (trace.empty()) throw cadmm::IoError("trace has no iterations to audit");

    const cadmm::TraceAudit audit = cadmm::audit_trace(trace, args.tol_mono);
    const bool dual_ok = audit.max_dual_identity_residual <= args.max_dual;
    const bool mono_ok = audit.monotonicity_violations == 0;
    const bool zviol_ok = audit.max_z_violation <= args.max_zviol;
    const bool passed = dual_ok && mono_ok && zviol_ok;

    std::printf("iterations audited:          %zu\n", trace.size());
    std::printf("max dual-identity residual:  %.17g  [%s <= %g]\n",
                audit.max_dual_identity_residual, dual_ok ? "ok" : "FAIL", args.max_dual);
    std::printf("monotonicity violations:     %d  [%s], max increase %.17g\n",
                audit.monotonicity_violations, mono_ok ? "ok" : "FAIL", audit.max_increase);
    std::printf("max z-constraint violation:  %.17g  [%s <= %g]\n", audit.max_z_violation,
                zviol_ok ? "ok" : "FAIL", args.max_zviol);
    std::printf("final dx_norm:               %.17g\n", audit.final_dx_norm);
    std::printf("final consensus residual:    %.17g\n", audit.final_consensus_residual);

    if (!args.json_path.empty()) {
        json doc;
        doc["max_dual_identity_residual"] = audit.max_dual_identity_residual;
        doc["monotonicity_violations"] = audit.monotonicity_violations;
        doc["max_increase"] = audit.max_increase;
        doc["max_z_violation"] = audit.max_z_violation;
        doc["final_dx_norm"] = audit.final_dx_norm;
        doc["final_consensus_residual"] = audit.final_consensus_residual;
        doc["passed"] = passed;
        std::ofstream out(args.json_path);
        if (!out) throw cadmm::IoError("cannot open " + args.json_path + " for writing");
        out << doc.dump(2) << "\n";
    }
    return passed ? kExitOk : kExitAudit;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"consensus splitting solver for complex QCQPs"};
    app.require_subcommand(1);

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "write a random instance JSON");
    int gen_n = 10, gen_m = 5;
    bool gen_pd = false;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen_cmd->add_option("--n", gen_n, "dimension")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--m", gen_m, "constraint count")->check(CLI::PositiveNumber);
    gen_cmd->add_flag("--pd-a0", gen_pd, "shift A0 to be positive definite");
    gen_cmd->add_option("--seed", gen_seed, "random seed");
    gen_cmd->add_option("--out", gen_out, "output instance path")->required();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "run the solver on an instance");
    SolveArgs solve_args;
    solve_cmd->add_option("--instance", solve_args.instance_path, "instance JSON")->required();
    solve_cmd->add_option("--rho", solve_args.rho, "Lagrangian parameter");
    solve_cmd->add_flag("--auto-rho", solve_args.auto_rho,
                        "derive rho from the descent bound and an estimated C");
    solve_cmd->add_option("--c-mode", solve_args.c_mode,
                          "empirical | statistical | fixed:<value>");
    solve_cmd->add_option("--iters", solve_args.iters, "iteration budget")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--tol-dx", solve_args.tol_dx,
                          "enable tolerance stopping on ||x_k - x_{k-1}||");
    solve_cmd->add_option("--tol-consensus", solve_args.tol_consensus,
                          "enable tolerance stopping on sum_i ||z_i - x||");
    solve_cmd->add_option("--trace", solve_args.trace_path, "trace CSV output");
    solve_cmd->add_option("--summary", solve_args.summary_path, "summary JSON output");
    solve_cmd->add_option("--threads", solve_args.threads, "parallel z-update cap")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--rho-safety", solve_args.rho_safety, "safety factor for auto rho");
    solve_cmd->add_option("--qcqp1-tol", solve_args.qcqp1_tol, "projection tolerance");
    solve_cmd->add_option("--x0", solve_args.x0, "initial point: feas | zero");
    solve_cmd->add_option("--pilot-iters", solve_args.pilot_iters,
                          "pilot length for auto rho");

    // replicate
    auto* rep_cmd = app.add_subcommand("replicate", "emit figure-style curve data");
    ReplicateArgs rep_args;
    rep_cmd->add_option("--figure", rep_args.figure, "fig1 | fig2 | fig3 | fig4 | fig5")
        ->required();
    rep_cmd->add_option("--outdir", rep_args.outdir, "output directory")->required();
    rep_cmd->add_option("--iters", rep_args.iters, "iterations per run")
        ->check(CLI::PositiveNumber);
    rep_cmd->add_option("--seed", rep_args.seed, "base seed");
    rep_cmd->add_option("--seeds", rep_args.seeds, "number of runs (fig3)")
        ->check(CLI::PositiveNumber);
    rep_cmd->add_option("--seed-list", rep_args.seed_list,
                        "explicit seeds for fig3 (overrides --seed/--seeds)")
        ->delimiter(',');
    rep_cmd->add_option("--n", rep_args.n, "dimension")->check(CLI::PositiveNumber);
    rep_cmd->add_option("--m", rep_args.m, "constraint count")->check(CLI::PositiveNumber);
    rep_cmd->add_option("--rho", rep_args.rho, "override the per-figure default rho");
    rep_cmd->add_option("--rho-list", rep_args.rho_list, "rho sweep (fig2)")->delimiter(',');
    rep_cmd->add_option("--m-list", rep_args.m_list, "constraint-count sweep (fig4)")
        ->delimiter(',');
    rep_cmd->add_option("--threads", rep_args.threads, "parallel z-update cap")
        ->check(CLI::PositiveNumber);

    // check
    auto* check_cmd = app.add_subcommand("check", "audit a trace or a fresh run");
    CheckArgs check_args;
    check_cmd->add_option("--trace", check_args.trace_path, "trace CSV to audit");
    check_cmd->add_option("--instance", check_args.instance_path, "instance JSON (with --rerun)");
    check_cmd->add_flag("--rerun", check_args.rerun, "re-run the solver and audit the result");
    check_cmd->add_option("--rho", check_args.rho, "rho for --rerun");
    check_cmd->add_option("--iters", check_args.iters, "iterations for --rerun")
        ->check(CLI::PositiveNumber);
    check_cmd->add_option("--threads", check_args.threads, "parallel z-update cap")
        ->check(CLI::PositiveNumber);
    check_cmd->add_option("--tol-mono", check_args.tol_mono, "relative monotonicity slack");
    check_cmd->add_option("--max-dual", check_args.max_dual,
                          "dual-identity residual threshold");
    check_cmd->add_option("--max-zviol", check_args.max_zviol,
                          "z-constraint violation threshold");
    check_cmd->add_option("--json", check_args.json_path, "write the audit numbers as JSON");

    try {
        app.parse(argc, argv);
        if (gen_cmd->parsed()) return cmd_generate(gen_n, gen_m, gen_pd, gen_seed, gen_out);
        if (solve_cmd->parsed()) return cmd_solve(solve_args);
        if (rep_cmd->parsed()) return cmd_replicate(rep_args);
        if (check_cmd->parsed()) return cmd_check(check_args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParameter;
    } catch (const cadmm::ParameterError& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return kExitParameter;
    } catch (const cadmm::NotPositiveDefiniteError& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return kExitParameter;
    } catch (const cadmm::InfeasibleSubproblemError& e) {
        std::fprintf(stderr, "infeasible subproblem: %s\n", e.what());
        return kExitParameter;
    } catch (const cadmm::IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const cadmm::ValidationError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
