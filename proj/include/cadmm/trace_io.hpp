#pragma once

#include <string>
#include <vector>

#include "cadmm/admm.hpp"

namespace cadmm {

/// Column order of the trace CSV. Floats are written with 17 significant
/// digits so values round-trip bit-exactly.
inline constexpr const char* kTraceCsvHeader =
    "k,L,dx_norm,consensus_residual,dual_identity_residual,objective,max_z_violation,"
    "empirical_C_ratio";

std::string trace_to_csv(const std::vector<TraceRecord>& trace);
void write_trace_csv(const std::vector<TraceRecord>& trace, const std::string& path);
std::vector<TraceRecord> read_trace_csv(const std::string& path);

/// Audit numbers computable from a trace alone (no instance needed).
struct TraceAudit {
    double max_dual_identity_residual = 0.0;
    int monotonicity_violations = 0;
    double max_increase = 0.0;
    double max_z_violation = 0.0;
    double final_dx_norm = 0.0;
    double final_consensus_residual = 0.0;
};

TraceAudit audit_trace(const std::vector<TraceRecord>& trace, double tol_mono = kMonotonicityTol);

/// Run summary as a JSON document: termination reason, iteration count,
/// final iterate, config echo, C estimates, A0 spectrum, and the same audit
/// numbers a trace-only audit reproduces.
std::string summary_to_json(const QcqpInstance& inst, const SolverConfig& config,
                            const RunResult& result, int indent = 2);

}  // namespace cadmm
