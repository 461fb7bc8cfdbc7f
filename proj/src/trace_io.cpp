#include "cadmm/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cadmm/errors.hpp"

namespace cadmm {

using nlohmann::json;

namespace {

std::string fmt17(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return std::string(buf);
}

double parse_double(const std::string& field, const std::string& where) {
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || (end && *end != '\0')) {
        throw IoError("malformed trace: bad numeric field '" + field + "' at " + where);
    }
    return value;
}

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
    std::ostringstream out;
    out << kTraceCsvHeader << "\n";
    for (const auto& rec : trace) {
        out << rec.k << ',' << fmt17(rec.lagrangian) << ',' << fmt17(rec.dx_norm) << ','
            << fmt17(rec.consensus_residual) << ',' << fmt17(rec.dual_identity_residual) << ','
            << fmt17(rec.objective) << ',' << fmt17(rec.max_z_violation) << ','
            << fmt17(rec.empirical_c_ratio) << "\n";
    }
    return out.str();
}

void write_trace_csv(const std::vector<TraceRecord>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << trace_to_csv(trace);
    if (!out) throw IoError("failed writing " + path);
}

std::vector<TraceRecord> read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty trace file " + path);
    if (line != kTraceCsvHeader) {
        throw IoError("unexpected trace header in " + path + ": " + line);
    }
    std::vector<TraceRecord> trace;
    int row = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8) {
            throw IoError("malformed trace: expected 8 fields in row " + std::to_string(row) +
                          " of " + path);
        }
        const std::string where = path + " row " + std::to_string(row);
        TraceRecord rec;
        rec.k = static_cast<int>(parse_double(fields[0], where));
        rec.lagrangian = parse_double(fields[1], where);
        rec.dx_norm = parse_double(fields[2], where);
        rec.consensus_residual = parse_double(fields[3], where);
        rec.dual_identity_residual = parse_double(fields[4], where);
        rec.objective = parse_double(fields[5], where);
        rec.max_z_violation = parse_double(fields[6], where);
        rec.empirical_c_ratio = parse_double(fields[7], where);
        trace.push_back(rec);
        ++row;
    }
    return trace;
}

TraceAudit audit_trace(const std::vector<TraceRecord>& trace, double tol_mono) {
    TraceAudit audit;
    if (trace.empty()) return audit;
    std::vector<double> lagrangians;
    lagrangians.reserve(trace.size());
    for (const auto& rec : trace) {
        audit.max_dual_identity_residual =
            std::max(audit.max_dual_identity_residual, rec.dual_identity_residual);
        audit.max_z_violation = std::max(audit.max_z_violation, rec.max_z_violation);
        lagrangians.push_back(rec.lagrangian);
    }
    if (lagrangians.size() >= 2) {
        const MonotonicityReport mono = audit_monotonicity(lagrangians, tol_mono);
        audit.monotonicity_violations = static_cast<int>(mono.violation_indices.size());
        audit.max_increase = mono.max_increase;
    }
    audit.final_dx_norm = trace.back().dx_norm;
    audit.final_consensus_residual = trace.back().consensus_residual;
    return audit;
}

std::string summary_to_json(const QcqpInstance& inst, const SolverConfig& config,
                            const RunResult& result, int indent) {
    const TraceAudit audit = audit_trace(result.trace);
    json doc;
    doc["termination"] = to_string(result.reason);
    doc["iterations"] = static_cast<int>(result.trace.size());
    doc["initial_L"] = result.initial_lagrangian;

    json final_state;
    json x = json::array();
    for (Eigen::Index j = 0; j < result.state.x.size(); ++j) {
        x.push_back(complex_json(result.state.x(j)));
    }
    final_state["x"] = std::move(x);
    if (!result.trace.empty()) {
        final_state["L"] = result.trace.back().lagrangian;
        final_state["objective"] = result.trace.back().objective;
        final_state["dx_norm"] = result.trace.back().dx_norm;
        final_state["consensus_residual"] = result.trace.back().consensus_residual;
    }
    const FeasibilityReport feas = check_feasible(inst, result.state.x);
    final_state["feasible"] = feas.feasible;
    final_state["worst_violation"] = feas.worst_violation;
    doc["final"] = std::move(final_state);

    doc["config"] = json{{"rho", config.rho},
                         {"max_iters", config.max_iters},
                         {"stop_mode", to_string(config.stop_mode)},
                         {"tol_dx", config.tol_dx},
                         {"tol_consensus", config.tol_consensus},
                         {"c_mode", to_string(config.c_mode)},
                         {"c_fixed", config.c_fixed},
                         {"rho_safety", config.rho_safety},
                         {"qcqp1_tol", config.qcqp1_tol},
                         {"seed", config.seed},
                         {"threads", config.threads}};
    doc["c_estimate"] = json{{"mu_hat", complex_json(result.c_estimate.mu_hat)},
                             {"sigma2_hat", result.c_estimate.sigma2_hat},
                             {"c_statistical", result.c_estimate.c_statistical},
                             {"c_empirical_max", result.c_estimate.c_empirical_max},
                             {"all_zero", result.c_estimate.all_zero},
                             {"samples", result.c_estimate.samples}};
    doc["spectral"] = json{{"lambda_min", result.lambda_min}, {"lambda_max", result.lambda_max}};
    doc["audit"] = json{{"max_dual_identity_residual", audit.max_dual_identity_residual},
                        {"monotonicity_violations", audit.monotonicity_violations},
                        {"max_increase", audit.max_increase},
                        {"max_z_violation", audit.max_z_violation},
                        {"final_dx_norm", audit.final_dx_norm},
                        {"final_consensus_residual", audit.final_consensus_residual}};
    doc["used_default_init"] = result.used_default_init;
    return doc.dump(indent);
}

}  // namespace cadmm
