// Constructive recovery of feasible points from relaxation solutions.
//
// Three routes:
//  * extract_if_definite -- when the face achieving sup q(., x*) contains a
//    positive definite aggregate, x* itself is feasible and is returned.
//  * pivot_decompose -- for polyhedral multiplier sets satisfying the hull
//    criterion: move the point along a direction v in V(F) with matched
//    epigraph slope s, out to the first new active generator on either side,
//    and recurse; the active face's affine dimension strictly grows, so the
//    recursion bottoms out on definite faces, whose points lie in D.
//  * purify_rank_reduction -- for large quadratic eigenvalue multiplicity:
//    peel rank-one components z z^T off the compressed second-moment block
//    and split x into x +- y (x) z with y chosen orthogonal to the active
//    gradients, halving weights at each split, until the certificate matrix
//    vanishes.
//
// The algorithms must fail loudly when their hypotheses do not hold;
// fabricating a decomposition for a point outside conv(D) is a bug, not a
// recovery.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "qcex/common.hpp"
#include "qcex/decomposition.hpp"
#include "qcex/gamma.hpp"
#include "qcex/linalg.hpp"
#include "qcex/model.hpp"
#include "qcex/shor.hpp"
#include "qcex/symmetry.hpp"

namespace qcex {

/// Largest epigraph tightening: max over the vertex generators of
/// q(gamma, x), halved. Throws when a ray makes the supremum infinite.
inline double tighten_t(const QcqpInstance& inst, const GammaPolyhedron& gp, const Vector& x,
                        double tol = 1e-7) {
    const SupResult s = sup_over_gamma(inst, x, gp, tol);
    if (!s.bounded) throw UnboundedSupError("tighten_t: supremum over Gamma is unbounded");
    return 0.5 * s.value;
}

struct ExtractionResult {
    std::optional<EpigraphPoint> point;  // present iff the face is definite
    Face face;
};

/// If the argmax face at the relaxation optimizer is definite, the
/// optimizer is feasible for the original problem and is returned with
/// t = Opt_SDP / 2; otherwise the semidefinite face is reported.
inline ExtractionResult extract_if_definite(const QcqpInstance& inst, const GammaPolyhedron& gp,
                                            const std::vector<Face>& faces,
                                            const ShorSolution& sol, double tol_feas = 1e-6) {
    ExtractionResult res;
    res.face = face_of(inst, gp, faces, sol.x);
    if (res.face.semidefinite) return res;
    EpigraphPoint pt{sol.x, 0.5 * sol.opt_sdp};
    if (!feasible_in_D(inst, pt, 10.0 * tol_feas))
        throw FeasibilityViolatedError(
            "extract_if_definite: definite-face point violates feasibility beyond 10x tolerance");
    res.point = pt;
    return res;
}

struct PivotOptions {
    int depth_cap = 0;  // 0: use m + 1
    double tol_feas = 1e-6;
    double tol_face = 1e-7;
};

namespace detail {

struct QuadraticMember {
    double a = 0.0;    // alpha^2 coefficient, >= 0
    double lin = 0.0;  // alpha coefficient
    double c0 = 0.0;   // value at alpha = 0, < 0 off the face
    std::string kind;  // "vertex" or "ray"
};

// smallest positive and largest negative crossing of the member set; each
// member is convex and negative at zero
inline std::pair<double, std::pair<double, std::string>> smallest_positive_root(
    const std::vector<QuadraticMember>& members, bool positive_side) {
    double best = std::numeric_limits<double>::infinity();
    std::string kind;
    for (const QuadraticMember& q : members) {
        const double scale = 1.0 + std::abs(q.lin) + std::abs(q.c0);
        double root = std::numeric_limits<double>::infinity();
        if (q.a > 1e-13 * scale) {
            const double disc = q.lin * q.lin - 4.0 * q.a * q.c0;
            const double sq = std::sqrt(std::max(0.0, disc));
            root = positive_side ? (-q.lin + sq) / (2.0 * q.a) : -((-q.lin - sq) / (2.0 * q.a));
        } else if (positive_side ? (q.lin > 1e-13 * scale) : (q.lin < -1e-13 * scale)) {
            root = -q.c0 / q.lin * (positive_side ? 1.0 : -1.0);
        }
        if (root < best) {
            best = root;
            kind = q.kind;
        }
    }
    return {best, {best, kind}};
}

}  // namespace detail

/// Recursive pivoting decomposition of a point of the projected SDP
/// epigraph into a convex combination of points of D. Requires the hull
/// criterion; on hypothesis violation the direction system has only the
/// zero solution and NoNonzeroDirectionError is thrown.
inline ConvexDecomposition pivot_decompose(const QcqpInstance& inst, const GammaPolyhedron& gp,
                                           const std::vector<Face>& faces,
                                           const EpigraphPoint& input,
                                           const PivotOptions& opt = {}) {
    const int m = inst.m();
    const int depth_cap = opt.depth_cap > 0 ? opt.depth_cap : m + 1;

    const SupResult sup0 = sup_over_gamma(inst, input.x, gp, opt.tol_face);
    if (!sup0.bounded)
        throw UnboundedSupError("pivot_decompose: point has unbounded multiplier supremum");
    const double scale0 = 1.0 + std::abs(sup0.value);
    if (sup0.value > 2.0 * input.t + opt.tol_face * scale0)
        throw FeasibilityViolatedError(
            "pivot_decompose: point lies outside the projected SDP epigraph");
    const double t_tight = 0.5 * sup0.value;
    const double t_shift = input.t - t_tight;

    ConvexDecomposition dec;

    const auto b_of = [&](const Vector& g) {
        Vector b = inst.q[0].b;
        for (int i = 1; i <= m; ++i) b += g(i - 1) * inst.q[static_cast<std::size_t>(i)].b;
        return b;
    };
    const auto b_hom = [&](const Vector& g) {
        Vector b = Vector::Zero(inst.dim);
        for (int i = 1; i <= m; ++i) b += g(i - 1) * inst.q[static_cast<std::size_t>(i)].b;
        return b;
    };

    const std::function<void(const Vector&, double, double, int)> recurse =
        [&](const Vector& x, double t, double weight, int depth) {
            if (depth > depth_cap)
                throw DepthExceededError("pivot_decompose: recursion exceeded the depth cap");
            const Face face = face_of(inst, gp, faces, x, opt.tol_face);
            if (!face.semidefinite) {
                EpigraphPoint leaf{x, t};
                if (!feasible_in_D(inst, leaf, 10.0 * opt.tol_feas))
                    throw FeasibilityViolatedError(
                        "pivot_decompose: definite-face leaf violates feasibility");
                dec.points.push_back(leaf);
                dec.weights.push_back(weight);
                return;
            }

            // direction (v, s): b(gamma)^T v = s on the face, v in V(F)
            const Matrix& B = face.V_basis.basis;
            const int d = static_cast<int>(B.cols());
            if (d == 0)
                throw NoNonzeroDirectionError(
                    "pivot_decompose: semidefinite face carries an empty null-space basis");
            Matrix sys(face.vertex_ids.size() + face.ray_ids.size(), d + 1);
            int r = 0;
            for (int vi : face.vertex_ids) {
                sys.block(r, 0, 1, d) =
                    (b_of(gp.vertices[static_cast<std::size_t>(vi)]).transpose() * B);
                sys(r, d) = -1.0;
                ++r;
            }
            for (int ri : face.ray_ids) {
                sys.block(r, 0, 1, d) =
                    (b_hom(gp.rays[static_cast<std::size_t>(ri)]).transpose() * B);
                sys(r, d) = 0.0;
                ++r;
            }
            const SubspaceBasis null = kernel_basis(sys, 1e-9);
            if (null.dim() == 0)
                throw NoNonzeroDirectionError(
                    "pivot_decompose: direction system has only the zero solution "
                    "(hull criterion violated on the active face)");
            Vector w = null.basis.col(0);
            Vector v = B * w.head(d);
            double s = w(d);
            const double vn = v.norm();
            if (vn <= 1e-12)
                throw NoNonzeroDirectionError(
                    "pivot_decompose: direction collapses to zero in x-space");
            v /= vn;
            s /= vn;

            // univariate members off the face: convex in alpha, negative at 0
            std::vector<detail::QuadraticMember> members;
            const double q0x = evaluate(inst, 0, x);
            Vector qvec(m);
            for (int i = 1; i <= m; ++i) qvec(i - 1) = evaluate(inst, i, x);
            for (std::size_t vi = 0; vi < gp.vertices.size(); ++vi) {
                if (std::find(face.vertex_ids.begin(), face.vertex_ids.end(),
                              static_cast<int>(vi)) != face.vertex_ids.end())
                    continue;
                const Vector& g = gp.vertices[vi];
                const AggregatedQuadratic agg = aggregate(inst, g);
                detail::QuadraticMember qm;
                qm.a = v.dot(agg.A * v);
                qm.lin = 2.0 * (x.dot(agg.A * v) + agg.b.dot(v) - s);
                qm.c0 = (q0x + g.dot(qvec)) - 2.0 * t;
                qm.kind = "vertex";
                members.push_back(qm);
            }
            for (std::size_t ri = 0; ri < gp.rays.size(); ++ri) {
                if (std::find(face.ray_ids.begin(), face.ray_ids.end(), static_cast<int>(ri)) !=
                    face.ray_ids.end())
                    continue;
                const Vector& g = gp.rays[ri];
                Matrix Ah = Matrix::Zero(inst.dim, inst.dim);
                for (int i = 1; i <= m; ++i) Ah += g(i - 1) * inst.q[static_cast<std::size_t>(i)].A;
                detail::QuadraticMember qm;
                qm.a = v.dot(Ah * v);
                qm.lin = 2.0 * (x.dot(Ah * v) + b_hom(g).dot(v));
                qm.c0 = g.dot(qvec);
                qm.kind = "ray";
                members.push_back(qm);
            }

            const auto [alpha_plus, pos_info] = detail::smallest_positive_root(members, true);
            const auto [alpha_minus_mag, neg_info] = detail::smallest_positive_root(members, false);
            if (!std::isfinite(alpha_plus) || !std::isfinite(alpha_minus_mag))
                throw SolverError(
                    "pivot_decompose: no finite pivot step; generator data inconsistent");
            const double alpha_minus = -alpha_minus_mag;

            DecompositionStep step;
            step.face_affdim_before = face.affine_dim;
            step.direction = v;
            step.direction_t = s;
            step.alpha_plus = alpha_plus;
            step.alpha_minus = alpha_minus;
            step.root_kind = pos_info.second + "/" + neg_info.second;

            const Vector x_pos = x + alpha_plus * v;
            const Vector x_neg = x + alpha_minus * v;
            const double t_pos = t + alpha_plus * s;
            const double t_neg = t + alpha_minus * s;
            step.face_affdim_after_pos = face_of(inst, gp, faces, x_pos, opt.tol_face).affine_dim;
            step.face_affdim_after_neg = face_of(inst, gp, faces, x_neg, opt.tol_face).affine_dim;
            dec.trace.push_back(step);

            const double w_pos = -alpha_minus / (alpha_plus - alpha_minus);
            recurse(x_pos, t_pos, weight * w_pos, depth + 1);
            recurse(x_neg, t_neg, weight * (1.0 - w_pos), depth + 1);
        };

    recurse(input.x, t_tight, 1.0, 0);
    for (EpigraphPoint& p : dec.points) p.t += t_shift;
    dec.all_in_D = true;
    return dec;
}

// ---------------------------------------------------------------------------
// rank reduction through the symmetry blocks

enum class PurifyVariant { hull, optimal_slice };

struct PurifyOptions {
    double tol_psd = 1e-8;
    double tol_feas = 1e-6;
};

/// Splits the relaxation solution into 2^rank feasible points with dyadic
/// weights. The hull variant needs k >= m + 2 and lands in D; the
/// optimal-slice variant needs k >= m + 1 and an optimal solution, and
/// lands in D intersected with the optimal objective slice.
inline ConvexDecomposition purify_rank_reduction(const QcqpInstance& inst,
                                                 const MultiplicityReport& k_report,
                                                 const ShorSolution& sol, PurifyVariant variant,
                                                 const PurifyOptions& opt = {}) {
    const int m = inst.m();
    const int k = k_report.k;
    const int N = inst.dim;
    const int n = N / k;
    if (k_report.method != MultiplicityMethod::structural || k_report.base_forms.empty())
        throw SystemInfeasibleError("purify: structural multiplicity report required");
    if (variant == PurifyVariant::hull && k < m + 2)
        throw SystemInfeasibleError("purify: hull variant requires k >= m + 2");
    if (variant == PurifyVariant::optimal_slice && k < m + 1)
        throw SystemInfeasibleError("purify: optimal-slice variant requires k >= m + 1");

    const Matrix M = sol.X - sol.x * sol.x.transpose();
    if (min_eigenvalue(M) < -100.0 * opt.tol_psd * std::max(1.0, M.norm()))
        throw SolverError("purify: second-moment residual is not PSD within tolerance");

    Matrix Z = Matrix::Zero(n, n);
    for (int l = 0; l < k; ++l) Z += M.block(l * n, l * n, n, n);
    const double z_scale = std::max(1.0, sym_eig(Z).eigenvalues.cwiseAbs().maxCoeff());
    const double band_lo = opt.tol_psd * z_scale;
    const double band_hi = 10.0 * opt.tol_psd * z_scale;

    const double t_hat = 0.5 * sol.opt_sdp;
    ConvexDecomposition dec;

    const std::function<void(const Vector&, Matrix, double)> recurse = [&](const Vector& x,
                                                                           Matrix Zc,
                                                                           double weight) {
        const EigenDecomposition ez = sym_eig(Zc);
        const double lam_max = ez.eigenvalues(n - 1);
        for (int i = 0; i < n; ++i)
            if (ez.eigenvalues(i) > band_lo && ez.eigenvalues(i) < band_hi)
                throw RankThresholdAmbiguousError(
                    "purify: certificate matrix has an eigenvalue inside the ambiguity band");
        if (lam_max <= band_lo) {
            EpigraphPoint leaf{x, t_hat};
            if (!feasible_in_D(inst, leaf, 10.0 * opt.tol_feas))
                throw FeasibilityViolatedError("purify: leaf violates feasibility");
            dec.points.push_back(leaf);
            dec.weights.push_back(weight);
            return;
        }

        const Vector z = std::sqrt(lam_max) * ez.eigenvectors.col(n - 1);
        const int first_row = (variant == PurifyVariant::hull) ? 0 : 1;
        Matrix rows(m + 1 - first_row, k);
        for (int i = first_row; i <= m; ++i) {
            const Quadratic& qi = inst.q[static_cast<std::size_t>(i)];
            const Vector grad = qi.A * x + qi.b;
            for (int l = 0; l < k; ++l)
                rows(i - first_row, l) = grad.segment(l * n, n).dot(z);
        }
        const SubspaceBasis null = kernel_basis(rows, 1e-10);
        if (null.dim() == 0)
            throw SystemInfeasibleError(
                "purify: splitting system has no nonzero solution (precondition violated)");
        const Vector y = null.basis.col(0);

        Vector yz(N);
        for (int l = 0; l < k; ++l) yz.segment(l * n, n) = y(l) * z;

        DecompositionStep step;
        step.split_x = x;
        step.split_y = y;
        step.split_z = z;
        step.first_order_term = (inst.q[0].A * x + inst.q[0].b).dot(yz);
        int rank = 0;
        for (int i = 0; i < n; ++i)
            if (ez.eigenvalues(i) >= band_hi) ++rank;
        step.rank_before = rank;
        dec.trace.push_back(step);

        const Matrix Znext = Zc - z * z.transpose();
        recurse(x + yz, Znext, 0.5 * weight);
        recurse(x - yz, Znext, 0.5 * weight);
    };

    recurse(sol.x, Z, 1.0);
    dec.all_in_D = true;
    return dec;
}

}  // namespace qcex
