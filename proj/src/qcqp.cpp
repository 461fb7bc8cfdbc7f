#include "cadmm/qcqp.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "cadmm/errors.hpp"

namespace cadmm {

using nlohmann::json;

QcqpInstance make_instance(ComplexMatrix A0, ComplexVector b0,
                           std::vector<QcqpConstraint> constraints, InstanceMeta meta) {
    const auto n = A0.rows();
    if (n < 1) throw ValidationError("instance dimension must be at least 1");
    if (constraints.empty()) throw ValidationError("instance needs at least one constraint");
    if (b0.size() != n) {
        throw ValidationError("b0 has length " + std::to_string(b0.size()) + ", expected " +
                              std::to_string(n));
    }
    validate_hermitian(A0);
    validate_finite(b0, "b0");
    A0 = symmetrize(A0);
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        auto& con = constraints[i];
        const std::string label = "constraint " + std::to_string(i + 1);
        if (con.A.rows() != n || con.A.cols() != n || con.b.size() != n) {
            throw ValidationError(label + " has mismatched dimensions");
        }
        if (!std::isfinite(con.c)) throw ValidationError(label + " has non-finite c");
        try {
            validate_hermitian(con.A);
        } catch (const ValidationError& e) {
            throw ValidationError(label + ": " + e.what());
        }
        validate_finite(con.b, label.c_str());
        con.A = symmetrize(con.A);
    }
    QcqpInstance inst;
    inst.n = static_cast<int>(n);
    inst.A0 = std::move(A0);
    inst.b0 = std::move(b0);
    inst.constraints = std::move(constraints);
    inst.meta = std::move(meta);
    return inst;
}

double objective(const QcqpInstance& inst, const ComplexVector& x) {
    return quad_form(inst.A0, inst.b0, x);
}

double constraint_value(const QcqpInstance& inst, int i, const ComplexVector& x) {
    if (i < 0 || i >= inst.m()) {
        throw ValidationError("constraint index " + std::to_string(i) + " out of range [0, " +
                              std::to_string(inst.m()) + ")");
    }
    const auto& con = inst.constraints[static_cast<std::size_t>(i)];
    return quad_form(con.A, con.b, x);
}

FeasibilityReport check_feasible(const QcqpInstance& inst, const ComplexVector& x, double tol) {
    if (tol < 0) throw ParameterError("feasibility tolerance must be nonnegative");
    FeasibilityReport report;
    report.slack.resize(inst.m());
    double min_slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < inst.m(); ++i) {
        const double slack = inst.constraints[static_cast<std::size_t>(i)].c -
                             constraint_value(inst, i, x);
        report.slack(i) = slack;
        min_slack = std::min(min_slack, slack);
    }
    report.worst_violation = std::max(0.0, -min_slack);
    report.feasible = min_slack >= -tol;
    return report;
}

std::pair<QcqpConstraint, QcqpConstraint> expand_equality(const ComplexMatrix& A,
                                                          const ComplexVector& b, double c) {
    validate_hermitian(A);
    validate_finite(b, "b");
    if (!std::isfinite(c)) throw ValidationError("equality right-hand side must be finite");
    QcqpConstraint le{A, b, c};
    QcqpConstraint ge{-A, -b, -c};
    return {le, ge};
}

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return Complex(j[0].get<double>(), j[1].get<double>());
    }
    throw IoError("expected a complex scalar ([re, im]) at " + where);
}

json vector_to_json(const ComplexVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

ComplexVector vector_from_json(const json& j, Eigen::Index n, const std::string& where) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
        throw IoError(where + " must be an array of length " + std::to_string(n));
    }
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = complex_from_json(j[static_cast<std::size_t>(i)],
                                 where + "[" + std::to_string(i) + "]");
    }
    return v;
}

json matrix_to_json(const ComplexMatrix& A) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < A.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index col = 0; col < A.cols(); ++col) {
            row.push_back(complex_to_json(A(r, col)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json& j, Eigen::Index n, const std::string& where) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
        throw IoError(where + " must be an array of " + std::to_string(n) + " rows");
    }
    ComplexMatrix A(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw IoError(where + " row " + std::to_string(r) + " must have " +
                          std::to_string(n) + " entries");
        }
        for (Eigen::Index col = 0; col < n; ++col) {
            A(r, col) = complex_from_json(row[static_cast<std::size_t>(col)],
                                          where + "(" + std::to_string(r) + "," +
                                              std::to_string(col) + ")");
        }
    }
    return A;
}

double real_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        if (j[1].get<double>() != 0.0) {
            throw IoError(where + " must be real, got nonzero imaginary part");
        }
        return j[0].get<double>();
    }
    throw IoError(where + " must be a real number");
}

}  // namespace

std::string instance_to_json(const QcqpInstance& inst, int indent) {
    json doc;
    doc["n"] = inst.n;
    doc["m"] = inst.m();
    doc["A0"] = matrix_to_json(inst.A0);
    doc["b0"] = vector_to_json(inst.b0);
    json cons = json::array();
    for (const auto& con : inst.constraints) {
        cons.push_back(json{{"A", matrix_to_json(con.A)}, {"b", vector_to_json(con.b)},
                            {"c", con.c}});
    }
    doc["constraints"] = std::move(cons);
    json meta;
    if (inst.meta.seed) meta["seed"] = *inst.meta.seed;
    if (inst.meta.x_feas) meta["x_feas"] = vector_to_json(*inst.meta.x_feas);
    if (inst.meta.pd_shift) meta["pd_shift"] = *inst.meta.pd_shift;
    if (inst.meta.redraws) meta["redraws"] = *inst.meta.redraws;
    if (!meta.empty()) doc["meta"] = std::move(meta);
    return doc.dump(indent);
}

QcqpInstance instance_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("instance JSON parse error: ") + e.what());
    }
    if (!doc.contains("n") || !doc.contains("A0") || !doc.contains("b0") ||
        !doc.contains("constraints")) {
        throw IoError("instance JSON is missing one of the required fields n, A0, b0, constraints");
    }
    const auto n = static_cast<Eigen::Index>(doc["n"].get<int>());
    if (n < 1) throw IoError("instance dimension n must be at least 1");
    ComplexMatrix A0 = matrix_from_json(doc["A0"], n, "A0");
    ComplexVector b0 = vector_from_json(doc["b0"], n, "b0");
    const json& cons = doc["constraints"];
    if (!cons.is_array() || cons.empty()) {
        throw IoError("constraints must be a non-empty array");
    }
    if (doc.contains("m") && doc["m"].get<int>() != static_cast<int>(cons.size())) {
        throw IoError("declared m = " + doc["m"].dump() + " does not match " +
                      std::to_string(cons.size()) + " constraint records");
    }
    std::vector<QcqpConstraint> constraints;
    constraints.reserve(cons.size());
    for (std::size_t i = 0; i < cons.size(); ++i) {
        const std::string where = "constraints[" + std::to_string(i) + "]";
        const json& rec = cons[i];
        if (!rec.contains("A") || !rec.contains("b") || !rec.contains("c")) {
            throw IoError(where + " is missing one of A, b, c");
        }
        constraints.push_back({matrix_from_json(rec["A"], n, where + ".A"),
                               vector_from_json(rec["b"], n, where + ".b"),
                               real_from_json(rec["c"], where + ".c")});
    }
    InstanceMeta meta;
    if (doc.contains("meta")) {
        const json& jm = doc["meta"];
        if (jm.contains("seed")) meta.seed = jm["seed"].get<std::uint64_t>();
        if (jm.contains("x_feas")) meta.x_feas = vector_from_json(jm["x_feas"], n, "meta.x_feas");
        if (jm.contains("pd_shift")) meta.pd_shift = jm["pd_shift"].get<double>();
        if (jm.contains("redraws")) meta.redraws = jm["redraws"].get<int>();
    }
    try {
        return make_instance(std::move(A0), std::move(b0), std::move(constraints),
                             std::move(meta));
    } catch (const ValidationError& e) {
        throw IoError(std::string("instance validation failed: ") + e.what());
    }
}

void save_instance(const QcqpInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << instance_to_json(inst) << "\n";
    if (!out) throw IoError("failed writing " + path);
}

QcqpInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return instance_from_json(text);
}

}  // namespace cadmm
