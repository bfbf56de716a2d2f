// Brute-force ground truth: multistart local search with penalty descent and
// Gauss-Newton feasibility polishing. Gives upper bounds on the optimal
// value and independent verification of convex decompositions; it never
// certifies global optimality.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qcex/common.hpp"
#include "qcex/decomposition.hpp"
#include "qcex/fixtures.hpp"
#include "qcex/linalg.hpp"
#include "qcex/model.hpp"

namespace qcex {

enum class OracleConfidence { exact_fixture, sampled };

struct OracleEstimate {
    Vector best_point;
    double best_value = 0.0;
    int starts = 0;
    double feasibility_residual = 0.0;
    bool found = false;
    OracleConfidence confidence = OracleConfidence::sampled;
};

struct OracleOptions {
    int starts = 256;
    int penalty_iters = 200;
    int polish_iters = 100;
    std::uint64_t seed = 0;
    double tol_feas = 1e-6;
    // enclosing-ball data from the definiteness certificate, when available
    std::optional<Vector> gamma_star;
};

namespace detail {

inline Vector quad_grad(const QcqpInstance& inst, int i, const Vector& x) {
    const Quadratic& q = inst.q[static_cast<std::size_t>(i)];
    return 2.0 * (q.A * x + q.b);
}

// one local search from x0: penalty descent then feasibility polish with
// tangent-space objective steps
inline std::pair<Vector, bool> local_search(const QcqpInstance& inst, Vector x,
                                            const OracleOptions& opt) {
    const int m = inst.m();

    auto penalty = [&](const Vector& z, double rho) {
        double phi = evaluate(inst, 0, z);
        for (int i = 1; i <= m; ++i) {
            const double v = evaluate(inst, i, z);
            const double viol = inst.is_inequality(i) ? std::max(0.0, v) : v;
            phi += rho * viol * viol;
        }
        return phi;
    };
    auto penalty_grad = [&](const Vector& z, double rho) {
        Vector g = quad_grad(inst, 0, z);
        for (int i = 1; i <= m; ++i) {
            const double v = evaluate(inst, i, z);
            const double viol = inst.is_inequality(i) ? std::max(0.0, v) : v;
            if (viol != 0.0) g += rho * 2.0 * viol * quad_grad(inst, i, z);
        }
        return g;
    };

    double rho = 10.0;
    double step = 1.0;
    for (int it = 0; it < opt.penalty_iters; ++it) {
        if (it > 0 && it % 25 == 0) rho *= 2.0;
        const double f0 = penalty(x, rho);
        const Vector g = penalty_grad(x, rho);
        const double gn = g.norm();
        if (gn < 1e-14) break;
        double s = step;
        bool moved = false;
        for (int bt = 0; bt < 30; ++bt) {
            const Vector cand = x - (s / gn) * g;
            if (penalty(cand, rho) < f0 - 1e-4 * s * gn) {
                x = cand;
                step = std::min(1.0, s * 2.0);
                moved = true;
                break;
            }
            s *= 0.5;
        }
        if (!moved) step = std::max(step * 0.5, 1e-12);
    }

    // polish: Gauss-Newton onto the active constraint set, then objective
    // steps in its tangent space
    auto active_rows = [&](const Vector& z, double margin) {
        std::vector<int> act;
        for (int i = 1; i <= m; ++i) {
            const double v = evaluate(inst, i, z);
            if (inst.is_equality(i) || v > -margin) act.push_back(i);
        }
        return act;
    };
    auto gn_project = [&](Vector z) {
        for (int it = 0; it < 25; ++it) {
            std::vector<int> rows;
            for (int i = 1; i <= m; ++i) {
                const double v = evaluate(inst, i, z);
                if (inst.is_equality(i) || v > 0.0) rows.push_back(i);
            }
            if (rows.empty()) break;
            Vector r(rows.size());
            Matrix J(rows.size(), inst.dim);
            double worst = 0.0;
            for (std::size_t a = 0; a < rows.size(); ++a) {
                r(a) = evaluate(inst, rows[a], z);
                J.row(a) = quad_grad(inst, rows[a], z).transpose();
                worst = std::max(worst, inst.is_equality(rows[a]) ? std::abs(r(a))
                                                                  : std::max(0.0, r(a)));
            }
            if (worst <= 1e-12) break;
            const Matrix JJt = J * J.transpose() +
                               1e-12 * Matrix::Identity(rows.size(), rows.size());
            const Vector dz = J.transpose() * JJt.ldlt().solve(r);
            z -= dz;
        }
        return z;
    };

    x = gn_project(x);
    double t_step = 0.25;
    for (int it = 0; it < opt.polish_iters; ++it) {
        const std::vector<int> act = active_rows(x, 1e-7);
        Vector g = quad_grad(inst, 0, x);
        if (!act.empty()) {
            Matrix J(act.size(), inst.dim);
            for (std::size_t a = 0; a < act.size(); ++a)
                J.row(a) = quad_grad(inst, act[a], x).transpose();
            const Matrix JJt = J * J.transpose() +
                               1e-12 * Matrix::Identity(act.size(), act.size());
            g -= J.transpose() * JJt.ldlt().solve(J * g);
        }
        const double gn = g.norm();
        if (gn < 1e-12) break;
        bool moved = false;
        double s = t_step;
        const double f0 = evaluate(inst, 0, x);
        for (int bt = 0; bt < 20; ++bt) {
            Vector cand = gn_project(x - (s / gn) * g);
            if (feasibility_residual(inst, cand) <= opt.tol_feas &&
                evaluate(inst, 0, cand) < f0 - 1e-10) {
                x = cand;
                t_step = std::min(0.5, s * 2.0);
                moved = true;
                break;
            }
            s *= 0.5;
        }
        if (!moved) {
            t_step *= 0.5;
            if (t_step < 1e-12) break;
        }
    }

    return {x, feasibility_residual(inst, x) <= opt.tol_feas};
}

}  // namespace detail

inline OracleEstimate estimate_opt(const QcqpInstance& inst, const OracleOptions& opt = {}) {
    OracleEstimate est;
    est.starts = opt.starts;

    Vector center = Vector::Zero(inst.dim);
    double radius = 2.0;
    if (opt.gamma_star && opt.gamma_star->size() == inst.m()) {
        const AggregatedQuadratic agg = aggregate(inst, *opt.gamma_star);
        const EigenDecomposition dec = sym_eig(agg.A);
        const double lam_min = dec.eigenvalues(0);
        if (lam_min > 1e-12) {
            center = -dec.eigenvectors *
                     (dec.eigenvalues.cwiseInverse().asDiagonal() *
                      (dec.eigenvectors.transpose() * agg.b));
            const double depth = std::abs(evaluate_aggregate(agg, center));
            radius = std::max(1.0, 2.0 * std::sqrt((1.0 + depth + agg.b.squaredNorm() / lam_min) / lam_min));
        }
    }

    auto consider = [&](const Vector& x0) {
        auto [x, ok] = detail::local_search(inst, x0, opt);
        if (!ok) return;
        const double val = evaluate(inst, 0, x);
        if (!est.found || val < est.best_value) {
            est.found = true;
            est.best_value = val;
            est.best_point = x;
            est.feasibility_residual = feasibility_residual(inst, x);
        }
    };

    consider(Vector::Zero(inst.dim));
    consider(center);
    for (int s = 0; s < opt.starts; ++s) {
        Rng rng(split_seed(opt.seed, static_cast<std::uint64_t>(s)));
        consider(center + radius * rng.normal_vector(inst.dim));
    }
    return est;
}

struct DecompositionReport {
    bool ok = false;
    double reconstruction_error = 0.0;
    double weight_sum_error = 0.0;
    double worst_leaf_residual = 0.0;
    std::vector<std::string> violations;
};

/// Independent re-check of a convex decomposition: weight normalization,
/// nonnegativity, weighted reconstruction of the original point, and leaf
/// membership in D. Uses only the instance evaluator, none of the
/// decomposition bookkeeping.
inline DecompositionReport verify_decomposition(const QcqpInstance& inst,
                                                const ConvexDecomposition& dec,
                                                const EpigraphPoint& original,
                                                double tol_feas = 1e-6,
                                                double tol_num = 1e-8) {
    DecompositionReport rep;
    if (dec.points.size() != dec.weights.size() || dec.points.empty()) {
        rep.violations.push_back("empty or ragged decomposition");
        return rep;
    }
    double wsum = 0.0;
    Vector xsum = Vector::Zero(inst.dim);
    double tsum = 0.0;
    for (std::size_t i = 0; i < dec.points.size(); ++i) {
        const double w = dec.weights[i];
        if (w < -tol_num)
            rep.violations.push_back("negative weight at leaf " + std::to_string(i));
        wsum += w;
        xsum += w * dec.points[i].x;
        tsum += w * dec.points[i].t;
        const double viol =
            std::max(feasibility_residual(inst, dec.points[i].x),
                     evaluate(inst, 0, dec.points[i].x) - 2.0 * dec.points[i].t);
        rep.worst_leaf_residual = std::max(rep.worst_leaf_residual, viol);
        if (viol > tol_feas)
            rep.violations.push_back("leaf " + std::to_string(i) + " infeasible");
    }
    rep.weight_sum_error = std::abs(wsum - 1.0);
    if (rep.weight_sum_error > tol_num) rep.violations.push_back("weights do not sum to one");

    const double scale = 1.0 + original.x.norm() + std::abs(original.t);
    rep.reconstruction_error =
        std::max((xsum - original.x).norm(), std::abs(tsum - original.t));
    if (rep.reconstruction_error > tol_num * scale)
        rep.violations.push_back("weighted sum does not reproduce the input point");

    rep.ok = rep.violations.empty();
    return rep;
}

}  // namespace qcex
