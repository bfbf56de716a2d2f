// Instance file format and report serialization.
//
// An instance is a single JSON document:
//   {
//     "name": "...",                               (optional)
//     "N": 2,
//     "objective":   {"A": [[1,0],[0,1]], "b": [5,0], "c": 0},
//     "constraints": [{"A": [[...]], "b": [...], "c": -5, "sense": "<="},
//                     {"A": [[...]], "b": [...], "c": 0,  "sense": "=="}],
//     "gamma_assert": {"H": [{"coeffs": [...], "rhs": 0.0}, ...]}  (optional)
//   }
// Matrices are row-major nested arrays and are symmetrized on load (with a
// warning when that changes anything). Constraints may appear in any order;
// inequalities are moved in front of equalities, preserving relative order.
// An asserted multiplier-set row reads  coeffs . gamma >= rhs.
#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcex/common.hpp"
#include "qcex/gamma.hpp"
#include "qcex/model.hpp"

namespace qcex {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InstanceFile {
    QcqpInstance instance;
    std::optional<std::vector<HalfSpace>> gamma_assert;
    std::vector<std::string> warnings;
};

namespace detail {

inline Matrix json_to_matrix(const nlohmann::json& j, int N, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != N)
        throw ParseError(what + ": expected " + std::to_string(N) + " rows");
    Matrix A(N, N);
    for (int r = 0; r < N; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != N)
            throw ParseError(what + ": row " + std::to_string(r) + " has wrong length");
        for (int c = 0; c < N; ++c) A(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return A;
}

inline Vector json_to_vector(const nlohmann::json& j, int N, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != N)
        throw ParseError(what + ": expected " + std::to_string(N) + " entries");
    Vector b(N);
    for (int i = 0; i < N; ++i) b(i) = j[static_cast<std::size_t>(i)].get<double>();
    return b;
}

inline Quadratic json_to_quadratic(const nlohmann::json& j, int N, const std::string& what) {
    if (!j.contains("A") || !j.contains("b") || !j.contains("c"))
        throw ParseError(what + ": needs fields A, b, c");
    Quadratic q;
    q.A = json_to_matrix(j["A"], N, what + ".A");
    q.b = json_to_vector(j["b"], N, what + ".b");
    q.c = j["c"].get<double>();
    return q;
}

inline nlohmann::json matrix_to_json(const Matrix& A) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < A.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < A.cols(); ++c) row.push_back(A(r, c));
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json vector_to_json(const Vector& b) {
    nlohmann::json v = nlohmann::json::array();
    for (int i = 0; i < b.size(); ++i) v.push_back(b(i));
    return v;
}

}  // namespace detail

inline InstanceFile parse_instance(const nlohmann::json& j) {
    InstanceFile file;
    if (!j.contains("N") || !j["N"].is_number_integer())
        throw ParseError("instance: integer field N required");
    const int N = j["N"].get<int>();
    if (N <= 0) throw ParseError("instance: N must be positive");
    if (!j.contains("objective")) throw ParseError("instance: objective required");
    if (!j.contains("constraints") || !j["constraints"].is_array() || j["constraints"].empty())
        throw ParseError("instance: nonempty constraints array required");

    QcqpInstance& inst = file.instance;
    inst.dim = N;
    inst.name = j.value("name", std::string());
    inst.q.push_back(detail::json_to_quadratic(j["objective"], N, "objective"));

    std::vector<Quadratic> ineqs, eqs;
    for (std::size_t i = 0; i < j["constraints"].size(); ++i) {
        const auto& cj = j["constraints"][i];
        const std::string what = "constraint " + std::to_string(i);
        const std::string sense = cj.value("sense", std::string("<="));
        if (sense != "<=" && sense != "==")
            throw ParseError(what + ": sense must be \"<=\" or \"==\"");
        (sense == "<=" ? ineqs : eqs).push_back(detail::json_to_quadratic(cj, N, what));
    }
    if (!eqs.empty() && !ineqs.empty() && j["constraints"].size() > ineqs.size()) {
        // any order accepted; internal layout is inequalities first
    }
    for (Quadratic& q : ineqs) inst.q.push_back(std::move(q));
    for (Quadratic& q : eqs) inst.q.push_back(std::move(q));
    inst.ineq_count = static_cast<int>(ineqs.size());
    inst.eq_count = static_cast<int>(eqs.size());

    file.warnings = symmetrize(inst);
    const std::vector<std::string> diags = validate(inst);
    if (!diags.empty()) {
        std::string msg = "instance failed validation:";
        for (const std::string& d : diags) msg += " [" + d + "]";
        throw ParseError(msg);
    }

    if (j.contains("gamma_assert")) {
        const auto& ga = j["gamma_assert"];
        if (!ga.contains("H") || !ga["H"].is_array())
            throw ParseError("gamma_assert: needs an array field H");
        std::vector<HalfSpace> rows;
        for (std::size_t r = 0; r < ga["H"].size(); ++r) {
            const auto& rj = ga["H"][r];
            HalfSpace h;
            h.coeffs = detail::json_to_vector(rj["coeffs"], inst.m(),
                                              "gamma_assert row " + std::to_string(r));
            h.rhs = rj.value("rhs", 0.0);
            rows.push_back(h);
        }
        file.gamma_assert = rows;
    }
    return file;
}

inline InstanceFile load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("instance file is not valid JSON: ") + e.what());
    }
    return parse_instance(j);
}

inline nlohmann::json instance_to_json(const QcqpInstance& inst,
                                       const std::vector<HalfSpace>* gamma_assert = nullptr) {
    nlohmann::json j;
    if (!inst.name.empty()) j["name"] = inst.name;
    j["N"] = inst.dim;
    nlohmann::json obj;
    obj["A"] = detail::matrix_to_json(inst.q[0].A);
    obj["b"] = detail::vector_to_json(inst.q[0].b);
    obj["c"] = inst.q[0].c;
    j["objective"] = obj;
    nlohmann::json cons = nlohmann::json::array();
    for (int i = 1; i <= inst.m(); ++i) {
        nlohmann::json cj;
        cj["A"] = detail::matrix_to_json(inst.q[static_cast<std::size_t>(i)].A);
        cj["b"] = detail::vector_to_json(inst.q[static_cast<std::size_t>(i)].b);
        cj["c"] = inst.q[static_cast<std::size_t>(i)].c;
        cj["sense"] = inst.is_inequality(i) ? "<=" : "==";
        cons.push_back(cj);
    }
    j["constraints"] = cons;
    if (gamma_assert != nullptr) {
        nlohmann::json rows = nlohmann::json::array();
        for (const HalfSpace& h : *gamma_assert) {
            nlohmann::json rj;
            rj["coeffs"] = detail::vector_to_json(h.coeffs);
            rj["rhs"] = h.rhs;
            rows.push_back(rj);
        }
        j["gamma_assert"] = {{"H", rows}};
    }
    return j;
}

}  // namespace qcex
