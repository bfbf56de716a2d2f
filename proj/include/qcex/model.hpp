// QCQP data model. A problem
//     inf { q_0(x) : q_i(x) <= 0 (inequalities), q_i(x) = 0 (equalities) }
// with q_i(x) = x^T A_i x + 2 b_i^T x + c_i is stored as a list of quadratics
// indexed 0..m, index 0 being the objective. Inequalities come before
// equalities. The epigraph set D lives in (x, t) with objective value 2t.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qcex/common.hpp"

namespace qcex {

struct Quadratic {
    Matrix A;
    Vector b;
    double c = 0.0;
};

struct QcqpInstance {
    int dim = 0;         // N
    int ineq_count = 0;  // m_I
    int eq_count = 0;    // m_E
    std::vector<Quadratic> q;  // size m+1, q[0] is the objective
    std::string name;

    int m() const { return ineq_count + eq_count; }
    bool is_inequality(int i) const { return i >= 1 && i <= ineq_count; }
    bool is_equality(int i) const { return i > ineq_count && i <= m(); }
};

struct AggregatedQuadratic {
    Vector gamma;
    // A(gamma) = A_0 + sum_i gamma_i A_i, likewise b, c
    Matrix A;
    Vector b;
    double c = 0.0;
    // homogeneous parts (sums without index 0)
    Matrix A_hom;
    Vector b_hom;
    double c_hom = 0.0;
};

struct EpigraphPoint {
    Vector x;
    double t = 0.0;  // objective measured as 2t
};

inline double evaluate(const QcqpInstance& inst, int i, const Vector& x) {
    if (i < 0 || i > inst.m()) throw DimensionError("evaluate: constraint index out of range");
    if (x.size() != inst.dim) throw DimensionError("evaluate: point dimension mismatch");
    const Quadratic& qi = inst.q[static_cast<std::size_t>(i)];
    return x.dot(qi.A * x) + 2.0 * qi.b.dot(x) + qi.c;
}

inline AggregatedQuadratic aggregate(const QcqpInstance& inst, const Vector& gamma) {
    if (gamma.size() != inst.m()) throw DimensionError("aggregate: multiplier dimension mismatch");
    AggregatedQuadratic agg;
    agg.gamma = gamma;
    agg.A_hom = Matrix::Zero(inst.dim, inst.dim);
    agg.b_hom = Vector::Zero(inst.dim);
    agg.c_hom = 0.0;
    for (int i = 1; i <= inst.m(); ++i) {
        const Quadratic& qi = inst.q[static_cast<std::size_t>(i)];
        const double g = gamma(i - 1);
        agg.A_hom += g * qi.A;
        agg.b_hom += g * qi.b;
        agg.c_hom += g * qi.c;
    }
    agg.A = inst.q[0].A + agg.A_hom;
    agg.b = inst.q[0].b + agg.b_hom;
    agg.c = inst.q[0].c + agg.c_hom;
    return agg;
}

/// q(gamma, x) evaluated through the aggregate data.
inline double evaluate_aggregate(const AggregatedQuadratic& agg, const Vector& x) {
    return x.dot(agg.A * x) + 2.0 * agg.b.dot(x) + agg.c;
}

/// Homogeneous part, sum_i gamma_i q_i(x).
inline double evaluate_aggregate_hom(const AggregatedQuadratic& agg, const Vector& x) {
    return x.dot(agg.A_hom * x) + 2.0 * agg.b_hom.dot(x) + agg.c_hom;
}

/// Membership of (x, t) in the epigraph set D at the given tolerance.
inline bool feasible_in_D(const QcqpInstance& inst, const EpigraphPoint& p, double tol) {
    if (evaluate(inst, 0, p.x) > 2.0 * p.t + tol) return false;
    for (int i = 1; i <= inst.m(); ++i) {
        const double v = evaluate(inst, i, p.x);
        if (inst.is_inequality(i)) {
            if (v > tol) return false;
        } else if (std::abs(v) > tol) {
            return false;
        }
    }
    return true;
}

/// Worst constraint violation of x over the constraint system (ignores the
/// objective row); used by the oracle and decomposition verifiers.
inline double feasibility_residual(const QcqpInstance& inst, const Vector& x) {
    double r = 0.0;
    for (int i = 1; i <= inst.m(); ++i) {
        const double v = evaluate(inst, i, x);
        r = std::max(r, inst.is_inequality(i) ? std::max(0.0, v) : std::abs(v));
    }
    return r;
}

/// Structural diagnostics. Empty result means well-formed. Asymmetry is
/// measured relative to max |A_i|; the symmetrize() helper repairs it.
inline std::vector<std::string> validate(const QcqpInstance& inst) {
    std::vector<std::string> diags;
    if (inst.dim <= 0) diags.push_back("dimension must be positive");
    if (inst.m() < 1) diags.push_back("no constraints: m_I + m_E must be at least 1");
    if (static_cast<int>(inst.q.size()) != inst.m() + 1)
        diags.push_back("quadratic count does not match m_I + m_E + 1");

    double scale = 0.0;
    for (const Quadratic& qi : inst.q)
        if (qi.A.size() > 0) scale = std::max(scale, qi.A.cwiseAbs().maxCoeff());
    const double tau_sym = 1e-10 * std::max(1.0, scale);

    for (std::size_t i = 0; i < inst.q.size(); ++i) {
        const Quadratic& qi = inst.q[i];
        const std::string tag = "quadratic " + std::to_string(i);
        if (qi.A.rows() != inst.dim || qi.A.cols() != inst.dim)
            diags.push_back(tag + ": matrix dimension mismatch");
        else if ((qi.A - qi.A.transpose()).cwiseAbs().maxCoeff() > tau_sym)
            diags.push_back(tag + ": matrix not symmetric");
        if (qi.b.size() != inst.dim) diags.push_back(tag + ": linear term dimension mismatch");
        if (!qi.A.allFinite() || !qi.b.allFinite() || !std::isfinite(qi.c))
            diags.push_back(tag + ": non-finite entry");
    }
    return diags;
}

/// Replace every A_i by its symmetric part. Quadratic forms only see the
/// symmetric part, so this is value-preserving; returns a warning per
/// repaired matrix.
inline std::vector<std::string> symmetrize(QcqpInstance& inst) {
    std::vector<std::string> warnings;
    double scale = 0.0;
    for (const Quadratic& qi : inst.q)
        if (qi.A.size() > 0) scale = std::max(scale, qi.A.cwiseAbs().maxCoeff());
    const double tau_sym = 1e-10 * std::max(1.0, scale);
    for (std::size_t i = 0; i < inst.q.size(); ++i) {
        Quadratic& qi = inst.q[i];
        if (qi.A.rows() != qi.A.cols()) continue;
        if ((qi.A - qi.A.transpose()).cwiseAbs().maxCoeff() > tau_sym)
            warnings.push_back("quadratic " + std::to_string(i) +
                               ": asymmetric matrix replaced by its symmetric part");
        qi.A = 0.5 * (qi.A + qi.A.transpose()).eval();
    }
    return warnings;
}

/// Magnitude scale of the instance data, for relative tolerances.
inline double data_scale(const QcqpInstance& inst) {
    double s = 1.0;
    for (const Quadratic& qi : inst.q) {
        if (qi.A.size() > 0) s = std::max(s, qi.A.cwiseAbs().maxCoeff());
        if (qi.b.size() > 0) s = std::max(s, qi.b.cwiseAbs().maxCoeff());
        s = std::max(s, std::abs(qi.c));
    }
    return s;
}

}  // namespace qcex
