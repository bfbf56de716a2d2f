// Assembly and solution of the standard semidefinite relaxation: the moment
// matrix Y = [[1, x^T],[x, X]] with one linear row per constraint, the
// definiteness certificate for the multiplier set, and the lifted SOCP
// relaxation of diagonal instances via the rotated-cone embedding.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "qcex/common.hpp"
#include "qcex/conic.hpp"
#include "qcex/linalg.hpp"
#include "qcex/model.hpp"
#include "qcex/oracle.hpp"

namespace qcex {

inline Matrix lift_quadratic(const Quadratic& q, int N) {
    Matrix Q = Matrix::Zero(N + 1, N + 1);
    Q(0, 0) = q.c;
    Q.block(0, 1, 1, N) = q.b.transpose();
    Q.block(1, 0, N, 1) = q.b;
    Q.block(1, 1, N, N) = q.A;
    return Q;
}

/// One (N+1)x(N+1) PSD block; row 0 pins Y_00 = 1, rows 1..m carry the
/// lifted constraint data with their senses.
inline BlockSdp build_shor(const QcqpInstance& inst) {
    const int N = inst.dim;
    BlockSdp sdp;
    sdp.add_block(N + 1);
    sdp.objective[0] = lift_quadratic(inst.q[0], N);

    SdpConstraint pin = sdp.make_row(Sense::Equal, 1.0);
    Matrix E00 = Matrix::Zero(N + 1, N + 1);
    E00(0, 0) = 1.0;
    pin.coeff[0] = E00;
    sdp.constraints.push_back(pin);

    for (int i = 1; i <= inst.m(); ++i) {
        SdpConstraint row = sdp.make_row(
            inst.is_inequality(i) ? Sense::LessEqual : Sense::Equal, 0.0);
        row.coeff[0] = lift_quadratic(inst.q[static_cast<std::size_t>(i)], N);
        sdp.constraints.push_back(row);
    }
    return sdp;
}

struct ShorSolution {
    Vector x;          // first moment column
    Matrix X;          // second moment block
    double opt_sdp = 0.0;
    Vector gamma_hat;  // dual multipliers of the data rows
    double gap = 0.0;
    SolveStatus status = SolveStatus::inaccurate;
    int iterations = 0;

    Matrix moment_matrix() const {
        const int N = static_cast<int>(x.size());
        Matrix Y(N + 1, N + 1);
        Y(0, 0) = 1.0;
        Y.block(0, 1, 1, N) = x.transpose();
        Y.block(1, 0, N, 1) = x;
        Y.block(1, 1, N, N) = X;
        return Y;
    }
};

inline ShorSolution solve_shor(const QcqpInstance& inst, const SolverOptions& opt = {}) {
    const ConicSolution sol = solve_sdp(build_shor(inst), opt);
    const int N = inst.dim;
    ShorSolution out;
    out.status = sol.status;
    out.iterations = sol.iterations;
    out.opt_sdp = sol.primal_objective;
    out.gap = sol.rel_gap;
    out.x = sol.blocks[0].block(1, 0, N, 1);
    out.X = sol.blocks[0].block(1, 1, N, N);
    out.gamma_hat = sol.duals.tail(inst.m());
    return out;
}

// ---------------------------------------------------------------------------
// definiteness certificate

enum class Tri { yes, no, unknown };

struct Assumption1Certificate {
    Vector gamma_star;
    double margin = 0.0;  // lambda_min(A(gamma_star)), recomputed
    std::optional<Vector> feasible_point;
    Tri holds = Tri::unknown;
};

/// Decide whether some multiplier gamma (componentwise nonnegative on
/// inequality rows) makes A(gamma) positive definite, by maximizing t in
/// A(gamma) >= t I over a large box. The maximization is run through its
/// conic dual, which the block solver handles directly; the multiplier is
/// read off the dual vector, nudged to strictly positive entries on
/// inequality rows, and re-verified by an eigenvalue computation.
inline Assumption1Certificate certify_assumption1(const QcqpInstance& inst,
                                                  const SolverOptions& sopt = {},
                                                  const OracleOptions& oopt = {}) {
    const int N = inst.dim;
    const int m = inst.m();
    const double box = 1e4;

    BlockSdp sdp;
    sdp.add_block(N);  // W
    sdp.objective[0] = inst.q[0].A;

    std::vector<int> sign_block(m + 1, -1), capu_block(m + 1, -1), capl_block(m + 1, -1);
    for (int j = 1; j <= m; ++j) {
        if (inst.is_inequality(j)) sign_block[j] = sdp.add_block(1);
        capu_block[j] = sdp.add_block(1);
        sdp.objective[capu_block[j]] = Matrix::Constant(1, 1, box);
        if (inst.is_equality(j)) {
            capl_block[j] = sdp.add_block(1);
            sdp.objective[capl_block[j]] = Matrix::Constant(1, 1, box);
        }
    }
    const int tcap_block = sdp.add_block(1);
    sdp.objective[tcap_block] = Matrix::Constant(1, 1, box);

    for (int j = 1; j <= m; ++j) {
        SdpConstraint row = sdp.make_row(Sense::Equal, 0.0);
        row.coeff[0] = inst.q[static_cast<std::size_t>(j)].A;
        if (sign_block[j] >= 0) row.coeff[sign_block[j]] = Matrix::Constant(1, 1, 1.0);
        row.coeff[capu_block[j]] = Matrix::Constant(1, 1, -1.0);
        if (capl_block[j] >= 0) row.coeff[capl_block[j]] = Matrix::Constant(1, 1, 1.0);
        sdp.constraints.push_back(row);
    }
    SdpConstraint trace_row = sdp.make_row(Sense::Equal, 1.0);
    trace_row.coeff[0] = Matrix::Identity(N, N);
    trace_row.coeff[tcap_block] = Matrix::Constant(1, 1, 1.0);
    sdp.constraints.push_back(trace_row);

    Assumption1Certificate cert;
    const ConicSolution sol = solve_sdp(sdp, sopt);
    if (sol.status != SolveStatus::optimal) {
        cert.holds = Tri::unknown;
        return cert;
    }

    cert.gamma_star = sol.duals.head(m);
    AggregatedQuadratic agg = aggregate(inst, cert.gamma_star);
    double margin = min_eigenvalue(agg.A);

    // strictly positive inequality multipliers, keeping half the margin
    if (margin > 0.0) {
        double norm_sum = 0.0;
        for (int j = 1; j <= m; ++j)
            norm_sum += inst.q[static_cast<std::size_t>(j)].A.norm();
        const double eps = margin / (2.0 * std::max(1.0, norm_sum));
        bool nudged = false;
        for (int j = 1; j <= m; ++j)
            if (inst.is_inequality(j) && cert.gamma_star(j - 1) < eps) {
                cert.gamma_star(j - 1) = eps;
                nudged = true;
            }
        if (nudged) {
            agg = aggregate(inst, cert.gamma_star);
            margin = min_eigenvalue(agg.A);
        }
    }
    cert.margin = margin;

    const double scale = std::max(1.0, agg.A.norm());
    if (margin <= sopt.tol_psd * scale) {
        // the solved maximum is a certificate of failure only if it is
        // decisively negative
        cert.holds = (sol.primal_objective < -sopt.tol_psd * scale) ? Tri::no : Tri::unknown;
        return cert;
    }

    OracleOptions search = oopt;
    search.gamma_star = cert.gamma_star;
    const OracleEstimate est = estimate_opt(inst, search);
    if (!est.found) {
        cert.holds = Tri::unknown;
        return cert;
    }
    cert.feasible_point = est.best_point;
    cert.holds = Tri::yes;
    return cert;
}

// ---------------------------------------------------------------------------
// epigraph membership through the relaxation, x fixed

/// Decide (x, t) in the projected SDP epigraph by solving the moment problem
/// with the first column pinned to x. Tolerance-based; an unsolvable pinned
/// problem reports non-membership.
inline bool membership_D_SDP_fallback(const QcqpInstance& inst, const EpigraphPoint& p,
                                      double tol = 1e-7, SolverOptions opt = {}) {
    const int N = inst.dim;
    BlockSdp sdp = build_shor(inst);
    for (int j = 0; j < N; ++j) {
        SdpConstraint row = sdp.make_row(Sense::Equal, p.x(j));
        Matrix E = Matrix::Zero(N + 1, N + 1);
        E(0, j + 1) = 0.5;
        E(j + 1, 0) = 0.5;
        row.coeff[0] = E;
        sdp.constraints.push_back(row);
    }
    opt.tol_gap = std::min(opt.tol_gap, 1e-9);
    const ConicSolution sol = solve_sdp(sdp, opt);
    if (sol.status != SolveStatus::optimal) return false;
    return sol.primal_objective <= 2.0 * p.t + tol * (1.0 + std::abs(sol.primal_objective));
}

// ---------------------------------------------------------------------------
// lifted SOCP relaxation of diagonal instances

inline bool is_diagonal_instance(const QcqpInstance& inst, double tol = 1e-12) {
    for (const Quadratic& q : inst.q) {
        const double scale = std::max(1.0, q.A.cwiseAbs().maxCoeff());
        Matrix off = q.A;
        off.diagonal().setZero();
        if (off.cwiseAbs().maxCoeff() > tol * scale) return false;
    }
    return true;
}

struct SocpSolution {
    double opt_socp = 0.0;
    Vector x;
    Vector y;  // lifted squares
    SolveStatus status = SolveStatus::inaccurate;
};

/// min <a_0, y> + 2 <b_0, x> + c_0 over the linear rows with y_j >= x_j^2,
/// each pair carried by a 2x2 PSD block with unit corner.
inline SocpSolution solve_socp(const QcqpInstance& inst, const SolverOptions& opt = {}) {
    if (!is_diagonal_instance(inst))
        throw DimensionError("solve_socp: instance is not diagonal");
    const int N = inst.dim;
    BlockSdp sdp;
    const std::vector<RotatedConeRef> refs = embed_rotated_cone(sdp, N);
    sdp.objective_offset = inst.q[0].c;
    for (int j = 0; j < N; ++j) {
        add_cone_y(sdp.objective, refs[j], inst.q[0].A(j, j));
        add_cone_x(sdp.objective, refs[j], 2.0 * inst.q[0].b(j));
    }
    for (int i = 1; i <= inst.m(); ++i) {
        const Quadratic& qi = inst.q[static_cast<std::size_t>(i)];
        SdpConstraint row = sdp.make_row(
            inst.is_inequality(i) ? Sense::LessEqual : Sense::Equal, -qi.c);
        for (int j = 0; j < N; ++j) {
            add_cone_y(row.coeff, refs[j], qi.A(j, j));
            add_cone_x(row.coeff, refs[j], 2.0 * qi.b(j));
        }
        sdp.constraints.push_back(row);
    }
    const ConicSolution sol = solve_sdp(sdp, opt);
    SocpSolution out;
    out.status = sol.status;
    out.opt_socp = sol.primal_objective;
    out.x.resize(N);
    out.y.resize(N);
    for (int j = 0; j < N; ++j) {
        out.x(j) = cone_x(sol, refs[j]);
        out.y(j) = cone_y(sol, refs[j]);
    }
    return out;
}

/// For fixed x, the least 2t admitting an SOCP-feasible lift, computed as a
/// scalar LP in z = y - x^2 >= 0; +inf when no lift exists.
inline std::optional<double> socp_epigraph_threshold(const QcqpInstance& inst,
                                                     const Vector& x,
                                                     const SolverOptions& opt = {}) {
    if (!is_diagonal_instance(inst))
        throw DimensionError("socp_epigraph_threshold: instance is not diagonal");
    const int N = inst.dim;
    Vector c(N);
    for (int j = 0; j < N; ++j) c(j) = inst.q[0].A(j, j);
    std::vector<LpRow> rows;
    for (int i = 1; i <= inst.m(); ++i) {
        const Quadratic& qi = inst.q[static_cast<std::size_t>(i)];
        LpRow row;
        row.a.resize(N);
        for (int j = 0; j < N; ++j) row.a(j) = qi.A(j, j);
        row.sense = inst.is_inequality(i) ? Sense::LessEqual : Sense::Equal;
        row.rhs = -evaluate(inst, i, x);
        rows.push_back(row);
    }
    const LpSolution lp = solve_lp(c, rows, opt);
    if (lp.status != SolveStatus::optimal) return std::nullopt;
    return 0.5 * (lp.value + evaluate(inst, 0, x));
}

}  // namespace qcex
