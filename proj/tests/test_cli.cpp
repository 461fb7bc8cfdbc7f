#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "cadmm/admm.hpp"
#include "cadmm/generator.hpp"
#include "cadmm/qcqp.hpp"
#include "cadmm/trace_io.hpp"

namespace fs = std::filesystem;
using namespace cadmm;
using nlohmann::json;

namespace {

std::string cli_path() {
    const char* path = std::getenv("CADMM_CLI");
    REQUIRE_MESSAGE(path != nullptr, "CADMM_CLI must point at the built binary");
    return path;
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("cadmm_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("generate is deterministic and prints spectral data") {
    TempDir tmp;
    const std::string a = tmp.file("a.json");
    const std::string b = tmp.file("b.json");
    CHECK(run_cli("generate --n 10 --m 5 --pd-a0 --seed 1 --out " + a) == 0);
    CHECK(run_cli("generate --n 10 --m 5 --pd-a0 --seed 1 --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));

    const QcqpInstance inst = load_instance(a);
    CHECK(eig_hermitian(inst.A0).lambda_min() >= 1.0 - 1e-9);

    const std::string c = tmp.file("c.json");
    CHECK(run_cli("generate --n 10 --m 5 --seed 1 --out " + c) == 0);
    const EigDecomposition eig = eig_hermitian(load_instance(c).A0);
    CHECK(eig.lambda_min() < 0.0);
    CHECK(eig.lambda_max() > 0.0);
}

TEST_CASE("solve emits a trace whose audit matches the summary exactly") {
    TempDir tmp;
    const std::string inst = tmp.file("inst.json");
    const std::string trace = tmp.file("trace.csv");
    const std::string summary = tmp.file("summary.json");
    const std::string audit = tmp.file("audit.json");
    REQUIRE(run_cli("generate --n 10 --m 5 --pd-a0 --seed 3 --out " + inst) == 0);
    REQUIRE(run_cli("solve --instance " + inst + " --rho 10 --iters 300 --trace " + trace +
                    " --summary " + summary) == 0);
    REQUIRE(run_cli("check --trace " + trace + " --json " + audit) == 0);

    const json s = json::parse(slurp(summary));
    const json a = json::parse(slurp(audit));
    CHECK(s["audit"]["max_dual_identity_residual"] == a["max_dual_identity_residual"]);
    CHECK(s["audit"]["monotonicity_violations"] == a["monotonicity_violations"]);
    CHECK(s["audit"]["max_increase"] == a["max_increase"]);
    CHECK(s["audit"]["max_z_violation"] == a["max_z_violation"]);
    CHECK(s["audit"]["final_dx_norm"] == a["final_dx_norm"]);
    CHECK(s["audit"]["final_consensus_residual"] == a["final_consensus_residual"]);
    CHECK(s["termination"] == "max_iterations");
    CHECK(a["passed"] == true);
}

TEST_CASE("divergence on an indefinite objective maps to its own exit code") {
    TempDir tmp;
    const std::string inst = tmp.file("indef.json");
    REQUIRE(run_cli("generate --n 10 --m 5 --seed 2 --out " + inst) == 0);
    const int rc =
        run_cli("solve --instance " + inst + " --rho 10 --iters 4000 --x0 feas");
    CHECK(rc == 2);
}

TEST_CASE("rho below the strong-convexity floor is a parameter error") {
    TempDir tmp;
    // lambda_min(A0) = -2 and m = 5 put the floor at 0.4.
    ComplexMatrix A0 = ComplexMatrix::Zero(2, 2);
    A0(0, 0) = Complex(-2.0, 0.0);
    A0(1, 1) = Complex(1.0, 0.0);
    std::vector<QcqpConstraint> cons(
        5, QcqpConstraint{ComplexMatrix::Identity(2, 2), ComplexVector::Zero(2), 1.0});
    const QcqpInstance inst = make_instance(A0, ComplexVector::Zero(2), cons);
    const std::string path = tmp.file("floor.json");
    save_instance(inst, path);
    CHECK(run_cli("solve --instance " + path + " --rho 0.01 --iters 10") == 3);
    CHECK(run_cli("solve --instance " + path + " --rho 0.4 --iters 10") == 3);
    CHECK(run_cli("solve --instance " + path + " --rho 0.401 --iters 10") == 0);
}

TEST_CASE("missing files and malformed traces map to the I/O exit code") {
    TempDir tmp;
    CHECK(run_cli("solve --instance " + tmp.file("absent.json") + " --rho 1") == 4);
    const std::string bad = tmp.file("bad.csv");
    std::ofstream(bad) << "not,a,trace\n";
    CHECK(run_cli("check --trace " + bad) == 4);
}

TEST_CASE("audit failure on an injected Lagrangian increase") {
    TempDir tmp;
    const std::string inst = tmp.file("inst.json");
    const std::string trace = tmp.file("trace.csv");
    REQUIRE(run_cli("generate --n 8 --m 3 --pd-a0 --seed 4 --out " + inst) == 0);
    REQUIRE(run_cli("solve --instance " + inst + " --rho 10 --iters 100 --trace " + trace) ==
            0);
    auto records = read_trace_csv(trace);
    REQUIRE(records.size() >= 10);
    records[5].lagrangian = records[4].lagrangian + 1.0;
    write_trace_csv(records, trace);
    CHECK(run_cli("check --trace " + trace) == 5);
}

TEST_CASE("trace bytes are identical across reruns with parallel z-updates") {
    TempDir tmp;
    const std::string inst = tmp.file("inst.json");
    const std::string t1 = tmp.file("t1.csv");
    const std::string t2 = tmp.file("t2.csv");
    REQUIRE(run_cli("generate --n 10 --m 6 --pd-a0 --seed 5 --out " + inst) == 0);
    REQUIRE(run_cli("solve --instance " + inst + " --rho 10 --iters 200 --threads 4 --trace " +
                    t1) == 0);
    REQUIRE(run_cli("solve --instance " + inst + " --rho 10 --iters 200 --threads 4 --trace " +
                    t2) == 0);
    CHECK(slurp(t1) == slurp(t2));
}

TEST_CASE("auto rho produces a monotone trace") {
    TempDir tmp;
    const std::string inst = tmp.file("inst.json");
    const std::string trace = tmp.file("trace.csv");
    REQUIRE(run_cli("generate --n 10 --m 5 --pd-a0 --seed 6 --out " + inst) == 0);
    REQUIRE(run_cli("solve --instance " + inst +
                    " --auto-rho --c-mode empirical --iters 400 --trace " + trace) == 0);
    CHECK(run_cli("check --trace " + trace) == 0);
}

TEST_CASE("replicate writes one curve file per sweep entry") {
    TempDir tmp;
    const std::string outdir = (tmp.path / "fig2").string();
    REQUIRE(run_cli("replicate --figure fig2 --outdir " + outdir + " --iters 40 --seed 1") ==
            0);
    for (const char* name : {"fig2_rho2.csv", "fig2_rho5.csv", "fig2_rho10.csv",
                             "fig2_rho20.csv"}) {
        CHECK(fs::exists(fs::path(outdir) / name));
    }
    const auto records = read_trace_csv((fs::path(outdir) / "fig2_rho10.csv").string());
    CHECK(records.size() == 40);

    const std::string out4 = (tmp.path / "fig4").string();
    REQUIRE(run_cli("replicate --figure fig4 --outdir " + out4 + " --iters 30 --seed 1") ==
            0);
    for (const char* name : {"fig4_m2.csv", "fig4_m5.csv", "fig4_m10.csv", "fig4_m20.csv"}) {
        CHECK(fs::exists(fs::path(out4) / name));
    }
}

TEST_CASE("replicate fig3 emits twenty monotone curves") {
    TempDir tmp;
    const std::string outdir = (tmp.path / "fig3").string();
    REQUIRE(run_cli("replicate --figure fig3 --outdir " + outdir + " --iters 200") == 0);
    int files = 0;
    for (int s = 1; s <= 20; ++s) {
        const fs::path path = fs::path(outdir) / ("fig3_seed" + std::to_string(s) + ".csv");
        REQUIRE(fs::exists(path));
        ++files;
        const TraceAudit audit = audit_trace(read_trace_csv(path.string()));
        CHECK(audit.monotonicity_violations == 0);
    }
    CHECK(files == 20);
}

TEST_CASE("replicate fig1 and fig5 show the expected trends") {
    TempDir tmp;
    const std::string d1 = (tmp.path / "fig1").string();
    REQUIRE(run_cli("replicate --figure fig1 --outdir " + d1 + " --iters 300 --seed 1") ==
            0);
    const auto indef = read_trace_csv((fs::path(d1) / "fig1_indefinite.csv").string());
    REQUIRE(!indef.empty());
    // Steady descent with no lower plateau.
    CHECK(indef.back().lagrangian < indef.front().lagrangian - 100.0);

    const std::string d5 = (tmp.path / "fig5").string();
    REQUIRE(run_cli("replicate --figure fig5 --outdir " + d5 + " --iters 500 --seed 1") ==
            0);
    const auto curve = read_trace_csv((fs::path(d5) / "fig5_distance.csv").string());
    REQUIRE(curve.size() == 500);
    CHECK(curve.back().dx_norm < 1e-6);
    CHECK(curve.back().consensus_residual < 1e-5);
    CHECK(curve.back().dx_norm < curve.front().dx_norm);
}

TEST_CASE("x-before-z update order breaks the dual identity audit") {
    TempDir tmp;
    const GeneratedInstance gen = generate({.n = 6, .m = 3, .pd_A0 = true, .seed = 7});
    const QcqpInstance& inst = gen.instance;
    const double rho = 10.0;
    const int m = inst.m();

    std::vector<Qcqp1Projector> projectors;
    for (const auto& con : inst.constraints) projectors.emplace_back(con.A, con.b, con.c);
    const ShiftedPdSolver x_solver(inst.A0, m * rho);

    IterateState state;
    state.x = gen.x_feas;
    state.z.assign(m, state.x);
    state.u.assign(m, ComplexVector::Zero(inst.n));

    std::vector<TraceRecord> trace;
    for (int k = 1; k <= 30; ++k) {
        IterateState next;
        next.k = k;
        // x first (from the stale z), then z, then u.
        ComplexVector rhs = inst.b0;
        for (int i = 0; i < m; ++i) rhs += rho * (state.z[i] + state.u[i]);
        next.x = x_solver.solve(rhs);
        next.z.resize(m);
        next.u.resize(m);
        for (int i = 0; i < m; ++i) {
            next.z[i] = projectors[i].project(next.x - state.u[i], 1e-10).z;
            next.u[i] = state.u[i] + next.z[i] - next.x;
        }
        TraceRecord rec;
        rec.k = k;
        rec.lagrangian = augmented_lagrangian(inst, next, rho);
        rec.dx_norm = (next.x - state.x).norm();
        rec.dual_identity_residual = dual_identity_residual(inst, next, rho);
        trace.push_back(rec);
        state = next;
    }
    const std::string path = tmp.file("swapped.csv");
    write_trace_csv(trace, path);
    CHECK(audit_trace(trace).max_dual_identity_residual > 1e-3);
    CHECK(run_cli("check --trace " + path) == 5);
}
