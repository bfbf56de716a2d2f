// Mechanical checkers for the sufficient conditions: the two convex-hull
// criteria (null-space dimension vs. affine dimension of the b-image, and
// its symmetry-parameter variant), the two objective-tightness criteria
// (origin excluded from the projected b-image, exactly or after a vanishing
// perturbation), the multiplicity thresholds that need no polyhedrality,
// the Burer-Ye coordinate condition for diagonal instances, and the
// corollary-class tagger. Every face test reduces to a small LP solved over
// generator weights; the reported margin is an L1 distance.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcex/common.hpp"
#include "qcex/conic.hpp"
#include "qcex/gamma.hpp"
#include "qcex/model.hpp"
#include "qcex/symmetry.hpp"

namespace qcex {

enum class ConditionId {
    hull_main,
    hull_symmetries,
    tight_main,
    tight_perturbed,
    hull_k_ge_m_plus_2,
    tight_k_ge_m_plus_1,
    burer_ye,
    corollary_class,
};

enum class Verdict { holds, fails, unknown };

struct FaceRecord {
    int face_index = -1;
    int v_dim = 0;
    int b_affdim = 0;
    double margin = 0.0;  // L1 distance of the origin from the projected b-image
};

struct ConditionReport {
    ConditionId id = ConditionId::hull_main;
    Verdict verdict = Verdict::unknown;
    std::vector<FaceRecord> face_records;
    std::optional<int> witness_face;
    std::optional<Vector> witness_gamma;
    std::optional<Vector> witness_h;
    std::optional<int> witness_coordinate;
    std::vector<std::string> tags;
    std::string notes;
};

inline const char* to_string(ConditionId id) {
    switch (id) {
        case ConditionId::hull_main: return "hull_main";
        case ConditionId::hull_symmetries: return "hull_symmetries";
        case ConditionId::tight_main: return "tight_main";
        case ConditionId::tight_perturbed: return "tight_perturbed";
        case ConditionId::hull_k_ge_m_plus_2: return "hull_k_ge_m_plus_2";
        case ConditionId::tight_k_ge_m_plus_1: return "tight_k_ge_m_plus_1";
        case ConditionId::burer_ye: return "burer_ye";
        case ConditionId::corollary_class: return "corollary_class";
    }
    return "?";
}

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::unknown: return "unknown";
    }
    return "?";
}

inline ConditionReport unavailable_report(ConditionId id, const std::string& why) {
    ConditionReport rep;
    rep.id = id;
    rep.verdict = Verdict::unknown;
    rep.notes = why;
    return rep;
}

// ---------------------------------------------------------------------------
// LP workhorse

struct HullDistance {
    double distance = 0.0;
    Vector point_weights;  // convex weights over the columns of `points`
    Vector ray_weights;
    bool solved = false;
};

/// L1 distance from `target` to conv(points) + cone(rays), columns as
/// generators; exact 0 means membership. A vanishing cost on the ray weights
/// keeps the optimal set bounded.
inline HullDistance l1_distance_to_hull(const Matrix& points, const Matrix& rays,
                                        const Vector& target, const SolverOptions& opt = {}) {
    const int d = static_cast<int>(target.size());
    const int np = static_cast<int>(points.cols());
    const int nr = static_cast<int>(rays.cols());
    const int n = np + nr + d;  // theta, rho, slack

    Vector c = Vector::Zero(n);
    for (int l = 0; l < d; ++l) c(np + nr + l) = 1.0;
    for (int j = 0; j < nr; ++j) c(np + j) = 1e-12;

    std::vector<LpRow> rows;
    for (int l = 0; l < d; ++l) {
        LpRow up;  // P theta + R rho - s <= g
        up.a = Vector::Zero(n);
        for (int i = 0; i < np; ++i) up.a(i) = points(l, i);
        for (int j = 0; j < nr; ++j) up.a(np + j) = rays(l, j);
        up.a(np + nr + l) = -1.0;
        up.sense = Sense::LessEqual;
        up.rhs = target(l);
        rows.push_back(up);

        LpRow down;  // -(P theta + R rho) - s <= -g
        down.a = -up.a;
        down.a(np + nr + l) = -1.0;
        down.sense = Sense::LessEqual;
        down.rhs = -target(l);
        rows.push_back(down);
    }
    LpRow sum;
    sum.a = Vector::Zero(n);
    for (int i = 0; i < np; ++i) sum.a(i) = 1.0;
    sum.sense = Sense::Equal;
    sum.rhs = 1.0;
    rows.push_back(sum);

    const LpSolution lp = solve_lp(c, rows, opt);
    HullDistance out;
    out.solved = lp.status == SolveStatus::optimal;
    if (!out.solved) return out;
    out.distance = std::max(0.0, lp.value);
    out.point_weights = lp.x.head(np);
    out.ray_weights = lp.x.segment(np, nr);
    return out;
}

namespace detail {

inline Vector b_of_gamma(const QcqpInstance& inst, const Vector& g) {
    Vector b = inst.q[0].b;
    for (int i = 1; i <= inst.m(); ++i) b += g(i - 1) * inst.q[static_cast<std::size_t>(i)].b;
    return b;
}

inline Vector b_hom_of_gamma(const QcqpInstance& inst, const Vector& g) {
    Vector b = Vector::Zero(inst.dim);
    for (int i = 1; i <= inst.m(); ++i) b += g(i - 1) * inst.q[static_cast<std::size_t>(i)].b;
    return b;
}

// projected b-image generators of a face: columns B^T b(v_i) and B^T b_hom(r_j)
inline void projected_b_generators(const QcqpInstance& inst, const GammaPolyhedron& gp,
                                   const Face& face, Matrix& points, Matrix& rays) {
    const Matrix& B = face.V_basis.basis;
    points.resize(B.cols(), face.vertex_ids.size());
    rays.resize(B.cols(), face.ray_ids.size());
    for (std::size_t i = 0; i < face.vertex_ids.size(); ++i)
        points.col(static_cast<int>(i)) =
            B.transpose() *
            b_of_gamma(inst, gp.vertices[static_cast<std::size_t>(face.vertex_ids[i])]);
    for (std::size_t j = 0; j < face.ray_ids.size(); ++j)
        rays.col(static_cast<int>(j)) =
            B.transpose() *
            b_hom_of_gamma(inst, gp.rays[static_cast<std::size_t>(face.ray_ids[j])]);
}

inline Vector face_gamma_from_weights(const GammaPolyhedron& gp, const Face& face,
                                      const Vector& theta, const Vector& rho) {
    Vector g = Vector::Zero(gp.vertices.empty() ? 0 : gp.vertices[0].size());
    for (std::size_t i = 0; i < face.vertex_ids.size(); ++i)
        g += theta(static_cast<int>(i)) * gp.vertices[static_cast<std::size_t>(face.vertex_ids[i])];
    for (std::size_t j = 0; j < face.ray_ids.size(); ++j)
        g += rho(static_cast<int>(j)) * gp.rays[static_cast<std::size_t>(face.ray_ids[j])];
    return g;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// convex hull checkers

inline ConditionReport check_hull_main(const QcqpInstance& inst, const GammaPolyhedron& gp,
                                       const std::vector<Face>& faces) {
    (void)gp;
    (void)inst;
    ConditionReport rep;
    rep.id = ConditionId::hull_main;
    rep.verdict = Verdict::holds;
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        const Face& f = faces[fi];
        if (!f.semidefinite) continue;
        FaceRecord rec;
        rec.face_index = static_cast<int>(fi);
        rec.v_dim = f.V_basis.dim();
        rec.b_affdim = f.b_affdim;
        rep.face_records.push_back(rec);
        if (rec.v_dim < rec.b_affdim + 1 && rep.verdict == Verdict::holds) {
            rep.verdict = Verdict::fails;
            rep.witness_face = static_cast<int>(fi);
        }
    }
    return rep;
}

inline ConditionReport check_hull_symmetries(const QcqpInstance& inst,
                                             const std::vector<Face>& faces, int k) {
    (void)inst;
    ConditionReport rep;
    rep.id = ConditionId::hull_symmetries;
    rep.verdict = Verdict::holds;
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        const Face& f = faces[fi];
        if (!f.semidefinite) continue;
        FaceRecord rec;
        rec.face_index = static_cast<int>(fi);
        rec.v_dim = k;  // the multiplicity lower-bounds the null space dimension
        rec.b_affdim = f.b_affdim;
        rep.face_records.push_back(rec);
        if (k < rec.b_affdim + 1 && rep.verdict == Verdict::holds) {
            rep.verdict = Verdict::fails;
            rep.witness_face = static_cast<int>(fi);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// tightness checkers

struct TightnessOptions {
    double margin = 1e-7;     // distances at or above this are decisive passes
    double zero_band = 1e-8;  // distances at or below this are decisive failures
    int random_directions = 8;
    int halvings = 7;  // perturbation scales h, h/2, ..., h/2^(halvings-1)
    std::uint64_t seed = 0;
    SolverOptions lp;

    TightnessOptions() {
        lp.tol_gap = 1e-10;  // decision LPs need absolute accuracy below the zero band
        lp.tol_feas = 1e-9;
    }
};

inline ConditionReport check_tight_main(const QcqpInstance& inst, const GammaPolyhedron& gp,
                                        const std::vector<Face>& faces,
                                        const TightnessOptions& opt = {}) {
    ConditionReport rep;
    rep.id = ConditionId::tight_main;
    rep.verdict = Verdict::holds;
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        const Face& f = faces[fi];
        if (!f.semidefinite) continue;
        if (f.V_basis.dim() == 0) {
            rep.verdict = Verdict::unknown;
            rep.notes = "degenerate face with empty null-space basis";
            continue;
        }
        Matrix points, rays;
        detail::projected_b_generators(inst, gp, f, points, rays);
        const HullDistance hd =
            l1_distance_to_hull(points, rays, Vector::Zero(points.rows()), opt.lp);
        FaceRecord rec;
        rec.face_index = static_cast<int>(fi);
        rec.v_dim = f.V_basis.dim();
        rec.b_affdim = f.b_affdim;
        rec.margin = hd.solved ? hd.distance : -1.0;
        rep.face_records.push_back(rec);

        if (!hd.solved) {
            if (rep.verdict != Verdict::fails) rep.verdict = Verdict::unknown;
            continue;
        }
        if (hd.distance >= opt.margin) continue;  // origin decisively excluded
        if (hd.distance <= opt.zero_band) {
            rep.verdict = Verdict::fails;
            if (!rep.witness_face) {
                rep.witness_face = static_cast<int>(fi);
                rep.witness_gamma =
                    detail::face_gamma_from_weights(gp, f, hd.point_weights, hd.ray_weights);
            }
        } else if (rep.verdict == Verdict::holds) {
            rep.verdict = Verdict::unknown;
            rep.notes = "margin below the decision threshold";
        }
    }
    return rep;
}

/// Searches finitely many perturbation directions; a success is constructive
/// (the witness direction shrinks geometrically and every scale passes every
/// face), while exhausting the samples is inconclusive by design.
inline ConditionReport check_tight_perturbed(const QcqpInstance& inst,
                                             const GammaPolyhedron& gp,
                                             const std::vector<Face>& faces,
                                             const TightnessOptions& opt = {}) {
    ConditionReport rep;
    rep.id = ConditionId::tight_perturbed;
    rep.verdict = Verdict::unknown;
    rep.notes = "no sampled direction passed every face at every scale";

    std::vector<const Face*> semis;
    for (const Face& f : faces)
        if (f.semidefinite) semis.push_back(&f);
    if (semis.empty()) {
        rep.verdict = Verdict::holds;
        rep.notes = "no semidefinite faces";
        return rep;
    }
    for (const Face* f : semis)
        if (f->V_basis.dim() == 0)
            return unavailable_report(ConditionId::tight_perturbed,
                                      "degenerate face with empty null-space basis");

    std::vector<Vector> candidates;
    for (int j = 0; j < inst.dim; ++j) candidates.push_back(Vector::Unit(inst.dim, j));
    Rng rng(split_seed(opt.seed, 0xd17));
    for (int r = 0; r < opt.random_directions; ++r) {
        Vector h = rng.normal_vector(inst.dim);
        candidates.push_back(h / h.norm());
    }

    for (const Vector& h : candidates) {
        bool ok = true;
        for (int j = 0; j < opt.halvings && ok; ++j) {
            const Vector hj = h / std::pow(2.0, j);
            for (const Face* f : semis) {
                Matrix points, rays;
                detail::projected_b_generators(inst, gp, *f, points, rays);
                const Vector target = -(f->V_basis.basis.transpose() * hj);
                const HullDistance hd = l1_distance_to_hull(points, rays, target, opt.lp);
                if (!hd.solved || hd.distance < opt.margin) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            rep.verdict = Verdict::holds;
            rep.witness_h = h;
            rep.notes.clear();
            return rep;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// multiplicity thresholds (no polyhedrality needed)

inline std::pair<ConditionReport, ConditionReport> check_k_thresholds(const QcqpInstance& inst,
                                                                      int k) {
    ConditionReport hull;
    hull.id = ConditionId::hull_k_ge_m_plus_2;
    hull.verdict = (k >= inst.m() + 2) ? Verdict::holds : Verdict::fails;
    hull.notes = "k = " + std::to_string(k) + ", m = " + std::to_string(inst.m());
    ConditionReport tight;
    tight.id = ConditionId::tight_k_ge_m_plus_1;
    tight.verdict = (k >= inst.m() + 1) ? Verdict::holds : Verdict::fails;
    tight.notes = hull.notes;
    return {hull, tight};
}

// ---------------------------------------------------------------------------
// Burer-Ye coordinate condition (diagonal, inequality-only)

inline ConditionReport check_burer_ye(const QcqpInstance& inst, const TightnessOptions& opt = {}) {
    ConditionReport rep;
    rep.id = ConditionId::burer_ye;
    if (!is_diagonal_instance(inst) || inst.eq_count != 0)
        return unavailable_report(ConditionId::burer_ye,
                                  "requires a diagonal instance without equality rows");

    const int m = inst.m();
    const int N = inst.dim;
    rep.verdict = Verdict::holds;
    for (int j = 0; j < N; ++j) {
        // minimize A(gamma)_jj + |b(gamma)_j| over gamma >= 0 with all
        // diagonal entries of A(gamma) nonnegative; an optimum of zero
        // exhibits a point of the coordinate-j set
        const int n = m + 1;  // gamma, slack for |b_j|
        Vector c = Vector::Zero(n);
        for (int i = 1; i <= m; ++i) c(i - 1) = inst.q[static_cast<std::size_t>(i)].A(j, j);
        c(m) = 1.0;

        std::vector<LpRow> rows;
        for (int l = 0; l < N; ++l) {
            LpRow row;  // -sum gamma_i A_i(l,l) <= A_0(l,l)
            row.a = Vector::Zero(n);
            for (int i = 1; i <= m; ++i) row.a(i - 1) = -inst.q[static_cast<std::size_t>(i)].A(l, l);
            row.sense = Sense::LessEqual;
            row.rhs = inst.q[0].A(l, l);
            rows.push_back(row);
        }
        for (double sgn : {1.0, -1.0}) {
            LpRow row;  // sgn * b(gamma)_j - s <= 0
            row.a = Vector::Zero(n);
            for (int i = 1; i <= m; ++i) row.a(i - 1) = sgn * inst.q[static_cast<std::size_t>(i)].b(j);
            row.a(m) = -1.0;
            row.sense = Sense::LessEqual;
            row.rhs = -sgn * inst.q[0].b(j);
            rows.push_back(row);
        }

        const LpSolution lp = solve_lp(c, rows, opt.lp);
        if (lp.status != SolveStatus::optimal) {
            if (rep.verdict != Verdict::fails) {
                rep.verdict = Verdict::unknown;
                rep.notes = "coordinate subproblem did not solve";
            }
            continue;
        }
        const double dist = lp.value + inst.q[0].A(j, j);
        FaceRecord rec;
        rec.face_index = j;  // coordinate, not a face
        rec.margin = dist;
        rep.face_records.push_back(rec);
        if (dist >= opt.margin) continue;
        if (dist <= opt.zero_band) {
            if (rep.verdict != Verdict::fails) {
                rep.verdict = Verdict::fails;
                rep.witness_coordinate = j;
                rep.witness_gamma = lp.x.head(m);
            }
        } else if (rep.verdict == Verdict::holds) {
            rep.verdict = Verdict::unknown;
            rep.notes = "margin below the decision threshold";
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// corollary classes

/// Tags the instance with every matching corollary class. The
/// homogeneous-constraint class additionally requires a certified polyhedral
/// multiplier set (its guarantee assumes one); the other classes imply
/// polyhedrality on their own.
inline ConditionReport classify_corollary(const QcqpInstance& inst,
                                          bool gamma_polyhedral_certified = false,
                                          double tol = 1e-10) {
    ConditionReport rep;
    rep.id = ConditionId::corollary_class;
    const double scale = data_scale(inst);

    bool convex = inst.eq_count == 0 &&
                  psd_check(inst.q[0].A, 1e-8) == Definiteness::positive_definite;
    for (int i = 1; convex && i <= inst.m(); ++i)
        if (psd_check(inst.q[static_cast<std::size_t>(i)].A, 1e-8) == Definiteness::indefinite)
            convex = false;
    if (convex) rep.tags.push_back("convex");

    if (inst.m() == 1) rep.tags.push_back("gtrs");

    bool b_zero = gamma_polyhedral_certified;
    for (int i = 1; b_zero && i <= inst.m(); ++i)
        if (inst.q[static_cast<std::size_t>(i)].b.cwiseAbs().maxCoeff() > tol * scale) b_zero = false;
    if (b_zero) rep.tags.push_back("homogeneous-constraint");

    bool scaled_id = inst.m() <= inst.dim;
    for (std::size_t i = 0; scaled_id && i < inst.q.size(); ++i) {
        const Matrix& A = inst.q[i].A;
        const double alpha = A.trace() / static_cast<double>(inst.dim);
        if ((A - alpha * Matrix::Identity(inst.dim, inst.dim)).cwiseAbs().maxCoeff() >
            tol * std::max(1.0, std::abs(alpha)) + tol * scale)
            scaled_id = false;
    }
    if (scaled_id) rep.tags.push_back("scaled-identity");

    rep.verdict = rep.tags.empty() ? Verdict::fails : Verdict::holds;
    return rep;
}

}  // namespace qcex
