// Geometry of the multiplier set
//     Gamma = { gamma : A(gamma) >= 0, gamma_i >= 0 on inequality rows }.
// When the forms are diagonal (or simultaneously diagonalizable by a
// congruence built from the definiteness certificate), Gamma is polyhedral
// with one linear row per eigencoordinate. This module assembles that
// H-representation (or accepts a user-asserted one, validated two ways
// against the PSD description), enumerates the vertex/ray representation
// exhaustively, builds the face lattice over active sets, classifies faces
// as definite or semidefinite, and computes the shared null space V(F) and
// the affine dimension of the image {b(gamma) : gamma in F}.
//
// Unbounded lineality directions are carried as opposite ray pairs. Vertex
// enumeration is exhaustive over row subsets, which is exact at the capped
// desk scale (rows <= 24).
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qcex/common.hpp"
#include "qcex/linalg.hpp"
#include "qcex/model.hpp"
#include "qcex/shor.hpp"
#include "qcex/symmetry.hpp"

namespace qcex {

struct EmptyPolyhedronError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HalfSpace {
    Vector coeffs;  // row reads coeffs . gamma >= rhs
    double rhs = 0.0;
};

enum class GammaProvenance { diagonal, congruence, convex_orthant, user_asserted };

struct GammaPolyhedron {
    std::vector<HalfSpace> hrep;
    std::vector<Vector> vertices;  // Gamma_e
    std::vector<Vector> rays;      // Gamma_r, unit norm, lineality as +- pairs
    GammaProvenance provenance = GammaProvenance::diagonal;
};

struct GammaOptions {
    double tol_psd = 1e-8;
    double tol_eig = 1e-8;
    double tol_active = 1e-7;
    int row_cap = 24;
    int face_cap = 5000;
};

// ---------------------------------------------------------------------------
// vertex/ray enumeration

struct VRep {
    std::vector<Vector> vertices;
    std::vector<Vector> rays;
};

/// Minkowski-Weyl data of { gamma : rows hold } by exhaustive enumeration of
/// row subsets, after splitting off the lineality space. Throws
/// EmptyPolyhedronError when the set is empty.
inline VRep double_description(const std::vector<HalfSpace>& rows, int dim,
                               const GammaOptions& opt = {}) {
    if (static_cast<int>(rows.size()) > opt.row_cap)
        throw FaceCapExceededError("double_description: row cap exceeded");

    const int nr = static_cast<int>(rows.size());
    Matrix C(nr, dim);
    Vector d(nr);
    double scale = 1.0;
    for (int i = 0; i < nr; ++i) {
        C.row(i) = rows[i].coeffs.transpose();
        d(i) = rows[i].rhs;
        scale = std::max({scale, rows[i].coeffs.norm(), std::abs(d(i))});
    }
    const double tol = 1e-9 * scale;

    // lineality space and its orthogonal complement
    const SubspaceBasis lin = kernel_basis(C, 1e-10);
    const SubspaceBasis comp = range_basis(C.transpose(), 1e-10);
    const int r = comp.dim();
    if (r > 12) throw FaceCapExceededError("double_description: quotient dimension too large");
    const Matrix Cq = C * comp.basis;  // nr x r

    VRep out;
    auto push_ray = [&](const Vector& ray) {
        Vector u = ray / ray.norm();
        for (const Vector& existing : out.rays)
            if ((existing - u).norm() <= 1e-9) return;
        out.rays.push_back(u);
    };
    auto push_vertex = [&](const Vector& v) {
        for (const Vector& existing : out.vertices)
            if ((existing - v).norm() <= 1e-9) return;
        out.vertices.push_back(v);
    };

    if (r == 0) {
        for (int i = 0; i < nr; ++i)
            if (d(i) > tol) throw EmptyPolyhedronError("double_description: empty polyhedron");
        out.vertices.push_back(Vector::Zero(dim));
    } else {
        const auto feasible = [&](const Vector& u) {
            for (int i = 0; i < nr; ++i)
                if (Cq.row(i).dot(u) < d(i) - tol) return false;
            return true;
        };
        // vertices: r active rows at a time
        std::vector<int> pick(r);
        const auto enum_subsets = [&](auto&& self, int start, int depth, auto&& emit) -> void {
            if (depth == 0) {
                emit();
                return;
            }
            for (int i = start; i <= nr - depth; ++i) {
                pick[static_cast<std::size_t>(pick.size()) - depth] = i;
                self(self, i + 1, depth - 1, emit);
            }
        };
        if (nr >= r) {
            enum_subsets(enum_subsets, 0, r, [&]() {
                Matrix S(r, r);
                Vector t(r);
                for (int a = 0; a < r; ++a) {
                    S.row(a) = Cq.row(pick[a]);
                    t(a) = d(pick[a]);
                }
                const Eigen::FullPivLU<Matrix> lu(S);
                if (lu.rank() < r) return;
                const Vector u = lu.solve(t);
                if ((S * u - t).cwiseAbs().maxCoeff() > 1e-7 * scale) return;
                if (feasible(u)) push_vertex(comp.basis * u);
            });
        }
        if (out.vertices.empty())
            throw EmptyPolyhedronError("double_description: empty polyhedron");

        // extreme rays of the recession cone: r-1 active rows
        const auto cone_feasible = [&](const Vector& z) {
            for (int i = 0; i < nr; ++i)
                if (Cq.row(i).dot(z) < -tol) return false;
            return true;
        };
        if (r == 1) {
            Vector one = Vector::Constant(1, 1.0);
            if (cone_feasible(one)) push_ray(comp.basis * one);
            if (cone_feasible(-one)) push_ray(comp.basis * (-one));
        } else {
            pick.assign(r - 1, 0);
            enum_subsets(enum_subsets, 0, r - 1, [&]() {
                Matrix S(r - 1, r);
                for (int a = 0; a < r - 1; ++a) S.row(a) = Cq.row(pick[a]);
                const SubspaceBasis nullsp = kernel_basis(S, 1e-10);
                if (nullsp.dim() != 1) return;
                Vector z = nullsp.basis.col(0);
                if (cone_feasible(z))
                    push_ray(comp.basis * z);
                else if (cone_feasible(-z))
                    push_ray(comp.basis * (-z));
            });
        }
    }
    for (int l = 0; l < lin.dim(); ++l) {
        push_ray(lin.basis.col(l));
        push_ray(-lin.basis.col(l));
    }
    return out;
}

// ---------------------------------------------------------------------------
// evaluation of sup_{gamma in Gamma} q(gamma, x) over the generators

struct SupResult {
    bool bounded = false;
    double value = 0.0;
    std::vector<int> argmax_vertices;
    std::vector<int> active_rays;
};

inline SupResult sup_over_gamma(const QcqpInstance& inst, const Vector& x,
                                const GammaPolyhedron& gp, double tol = 1e-7) {
    const int m = inst.m();
    Vector qvec(m);
    for (int i = 1; i <= m; ++i) qvec(i - 1) = evaluate(inst, i, x);
    const double q0 = evaluate(inst, 0, x);

    SupResult res;
    res.bounded = true;
    const double ray_scale = 1.0 + qvec.cwiseAbs().maxCoeff();
    for (std::size_t j = 0; j < gp.rays.size(); ++j) {
        const double rv = gp.rays[j].dot(qvec);
        if (rv > tol * ray_scale) {
            res.bounded = false;
            return res;
        }
        if (rv > -tol * ray_scale) res.active_rays.push_back(static_cast<int>(j));
    }
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> vals(gp.vertices.size());
    for (std::size_t i = 0; i < gp.vertices.size(); ++i) {
        vals[i] = q0 + gp.vertices[i].dot(qvec);
        best = std::max(best, vals[i]);
    }
    const double vertex_scale = 1.0 + std::abs(best);
    for (std::size_t i = 0; i < gp.vertices.size(); ++i)
        if (vals[i] >= best - tol * vertex_scale)
            res.argmax_vertices.push_back(static_cast<int>(i));
    res.value = best;
    return res;
}

/// Membership of (x, t) in the projected SDP epigraph: the finite-generator
/// route when a polyhedral description is available, the pinned moment
/// problem otherwise.
inline bool membership_D_SDP(const QcqpInstance& inst, const EpigraphPoint& p,
                             const GammaPolyhedron* gp, double tol = 1e-7,
                             const SolverOptions& opt = {}) {
    if (gp != nullptr) {
        const SupResult s = sup_over_gamma(inst, p.x, *gp, tol);
        if (!s.bounded) return false;
        return s.value <= 2.0 * p.t + tol * (1.0 + std::abs(s.value));
    }
    return membership_D_SDP_fallback(inst, p, tol, opt);
}

// ---------------------------------------------------------------------------
// H-representation assembly

namespace detail {

inline void append_sign_rows(const QcqpInstance& inst, std::vector<HalfSpace>& rows) {
    for (int i = 1; i <= inst.m(); ++i)
        if (inst.is_inequality(i)) {
            HalfSpace h;
            h.coeffs = Vector::Unit(inst.m(), i - 1);
            h.rhs = 0.0;
            rows.push_back(h);
        }
}

inline std::vector<HalfSpace> dedup_rows(const std::vector<HalfSpace>& rows) {
    std::vector<HalfSpace> out;
    for (const HalfSpace& h : rows) {
        const double n = h.coeffs.norm();
        if (n <= 1e-14) {
            if (h.rhs > 1e-12) throw EmptyPolyhedronError("gamma: contradictory trivial row");
            continue;  // 0 >= nonpositive, vacuous
        }
        HalfSpace u;
        u.coeffs = h.coeffs / n;
        u.rhs = h.rhs / n;
        bool dup = false;
        for (const HalfSpace& e : out)
            if ((e.coeffs - u.coeffs).norm() <= 1e-9 && std::abs(e.rhs - u.rhs) <= 1e-9) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(u);
    }
    return out;
}

// joint orthogonal diagonalization of a commuting symmetric family by a
// random aggregate, verified a posteriori
inline std::optional<std::vector<Vector>> joint_diagonalize(const std::vector<Matrix>& mats,
                                                            double tol) {
    const int n = static_cast<int>(mats[0].rows());
    Rng rng(0x7a3d5bc1);
    for (int attempt = 0; attempt < 4; ++attempt) {
        Matrix combo = Matrix::Zero(n, n);
        for (const Matrix& m : mats) combo += rng.normal() * m;
        const EigenDecomposition dec = sym_eig(combo);
        bool ok = true;
        std::vector<Vector> diags;
        for (const Matrix& m : mats) {
            const Matrix t = dec.eigenvectors.transpose() * m * dec.eigenvectors;
            Matrix off = t;
            off.diagonal().setZero();
            const double scale = std::max(1.0, m.norm());
            if (off.cwiseAbs().maxCoeff() > tol * scale) {
                ok = false;
                break;
            }
            diags.push_back(t.diagonal());
        }
        if (ok) return diags;
    }
    return std::nullopt;
}

}  // namespace detail

/// Construct the polyhedral description of the multiplier set. Tries the
/// diagonal route, then simultaneous diagonalization through the
/// certificate's congruence, then a user-asserted H-representation; throws
/// NotCertifiablyPolyhedralError when none applies. Every produced
/// description is cross-validated against the PSD definition.
inline GammaPolyhedron build_gamma(const QcqpInstance& inst,
                                   const Assumption1Certificate* cert = nullptr,
                                   const std::vector<HalfSpace>* asserted = nullptr,
                                   const GammaOptions& opt = {}) {
    const int m = inst.m();
    GammaPolyhedron gp;

    // convex class: A_0 > 0 and every constraint form PSD with no equality
    // rows makes the multiplier set exactly the nonnegative orthant
    const auto convex_orthant = [&]() {
        if (inst.eq_count != 0) return false;
        if (psd_check(inst.q[0].A, opt.tol_psd) != Definiteness::positive_definite) return false;
        for (int i = 1; i <= m; ++i)
            if (psd_check(inst.q[static_cast<std::size_t>(i)].A, opt.tol_psd) ==
                Definiteness::indefinite)
                return false;
        return true;
    };

    std::vector<HalfSpace> rows;
    if (is_diagonal_instance(inst)) {
        gp.provenance = GammaProvenance::diagonal;
        for (int j = 0; j < inst.dim; ++j) {
            HalfSpace h;
            h.coeffs.resize(m);
            for (int i = 1; i <= m; ++i) h.coeffs(i - 1) = inst.q[static_cast<std::size_t>(i)].A(j, j);
            h.rhs = -inst.q[0].A(j, j);
            rows.push_back(h);
        }
        detail::append_sign_rows(inst, rows);
    } else if (convex_orthant()) {
        gp.provenance = GammaProvenance::convex_orthant;
        detail::append_sign_rows(inst, rows);
    } else if (cert != nullptr && cert->margin > 0.0) {
        const AggregatedQuadratic agg = aggregate(inst, cert->gamma_star);
        const Matrix T = inverse_sqrt(agg.A);
        std::vector<Matrix> transformed;
        for (const Quadratic& q : inst.q) transformed.push_back(T * q.A * T);
        bool commuting = true;
        for (std::size_t a = 0; a < transformed.size() && commuting; ++a)
            for (std::size_t b = a + 1; b < transformed.size(); ++b) {
                const Matrix comm = transformed[a] * transformed[b] - transformed[b] * transformed[a];
                const double scale =
                    std::max(1.0, transformed[a].norm() * transformed[b].norm());
                if (comm.norm() > 1e-8 * scale) {
                    commuting = false;
                    break;
                }
            }
        std::optional<std::vector<Vector>> diags;
        if (commuting) diags = detail::joint_diagonalize(transformed, 1e-8);
        if (!diags) {
            if (asserted == nullptr)
                throw NotCertifiablyPolyhedralError(
                    "gamma: forms are not certifiably simultaneously diagonalizable");
        } else {
            gp.provenance = GammaProvenance::congruence;
            for (int j = 0; j < inst.dim; ++j) {
                HalfSpace h;
                h.coeffs.resize(m);
                for (int i = 1; i <= m; ++i) h.coeffs(i - 1) = (*diags)[static_cast<std::size_t>(i)](j);
                h.rhs = -(*diags)[0](j);
                rows.push_back(h);
            }
            detail::append_sign_rows(inst, rows);
        }
    }
    if (rows.empty()) {
        if (asserted == nullptr)
            throw NotCertifiablyPolyhedralError(
                "gamma: no diagonalization found and no asserted H-representation given");
        gp.provenance = GammaProvenance::user_asserted;
        rows = *asserted;
    }

    gp.hrep = detail::dedup_rows(rows);
    const VRep vr = double_description(gp.hrep, m, opt);
    gp.vertices = vr.vertices;
    gp.rays = vr.rays;

    // cross-validation against the PSD description
    auto in_true_gamma = [&](const Vector& g, double tol) {
        for (int i = 1; i <= m; ++i)
            if (inst.is_inequality(i) && g(i - 1) < -tol) return false;
        const AggregatedQuadratic agg = aggregate(inst, g);
        return min_eigenvalue(agg.A) >= -tol * std::max(1.0, agg.A.norm());
    };
    // every vertex, and every vertex pushed along every ray, must satisfy the
    // PSD description (the V-rep keeps rays in the recession cone, so these
    // probes all lie in the described polyhedron)
    const double vtol = opt.tol_psd * 100.0;
    for (const Vector& v : gp.vertices) {
        if (!in_true_gamma(v, vtol))
            throw NotCertifiablyPolyhedralError("gamma: vertex fails the PSD description");
        for (const Vector& ray : gp.rays)
            for (double s : {1.0, 10.0, 100.0})
                if (!in_true_gamma(v + s * ray, vtol * s))
                    throw NotCertifiablyPolyhedralError("gamma: ray fails the PSD description");
    }

    if (gp.provenance == GammaProvenance::user_asserted) {
        // containment direction: random points of the asserted set are PSD
        Rng rng(0x5eed);
        const int nv = static_cast<int>(gp.vertices.size());
        for (int t = 0; t < 100; ++t) {
            Vector g = Vector::Zero(m);
            double wsum = 0.0;
            for (int i = 0; i < nv; ++i) {
                const double w = rng.uniform();
                wsum += w;
                g += w * gp.vertices[static_cast<std::size_t>(i)];
            }
            g /= wsum;
            for (const Vector& ray : gp.rays) g += 2.0 * rng.uniform() * ray;
            bool inside_asserted = true;
            for (const HalfSpace& h : gp.hrep)
                if (h.coeffs.dot(g) < h.rhs - 1e-9) inside_asserted = false;
            if (inside_asserted && !in_true_gamma(g, vtol))
                throw NotCertifiablyPolyhedralError(
                    "gamma: asserted H-representation rejected (point outside the PSD set)");
        }
        // support direction: stepping just beyond any tight facet must leave
        // the PSD set, otherwise the assertion under-covers
        for (std::size_t rix = 0; rix < gp.hrep.size(); ++rix) {
            const HalfSpace& h = gp.hrep[rix];
            Vector base = Vector::Zero(m);
            int count = 0;
            for (const Vector& v : gp.vertices)
                if (std::abs(h.coeffs.dot(v) - h.rhs) <= 1e-8 * (1.0 + v.norm())) {
                    base += v;
                    ++count;
                }
            if (count == 0) continue;  // row not supporting, harmless
            base /= static_cast<double>(count);
            for (const Vector& ray : gp.rays)
                if (std::abs(h.coeffs.dot(ray)) <= 1e-9) base += ray;
            const Vector outside = base - 1e-4 * (1.0 + base.norm()) * h.coeffs;
            if (in_true_gamma(outside, 1e-9))
                throw NotCertifiablyPolyhedralError(
                    "gamma: asserted H-representation rejected (facet " + std::to_string(rix) +
                    " is not supporting)");
        }
    }
    return gp;
}

// ---------------------------------------------------------------------------
// face lattice

struct Face {
    std::vector<int> active_rows;
    std::vector<int> vertex_ids;
    std::vector<int> ray_ids;
    Vector relint_point;
    bool semidefinite = false;
    SubspaceBasis V_basis;  // present iff semidefinite
    int b_affdim = 0;
    int affine_dim = 0;
    bool maximal_semidefinite = false;
    std::optional<Vector> witness_x;
};

/// Definite/semidefinite classification at the relative-interior point
/// (vertex mean plus ray sum); fills V(F) as the null space of the
/// aggregate there when semidefinite.
inline void classify_face(const QcqpInstance& inst, const GammaPolyhedron& gp, Face& face,
                          const GammaOptions& opt = {}) {
    Vector relint = Vector::Zero(inst.m());
    for (int vi : face.vertex_ids) relint += gp.vertices[static_cast<std::size_t>(vi)];
    relint /= static_cast<double>(face.vertex_ids.size());
    for (int ri : face.ray_ids) relint += gp.rays[static_cast<std::size_t>(ri)];
    face.relint_point = relint;

    const AggregatedQuadratic agg = aggregate(inst, relint);
    face.semidefinite = psd_check(agg.A, opt.tol_psd) != Definiteness::positive_definite;
    if (face.semidefinite)
        face.V_basis = null_space(agg.A, opt.tol_eig);
    else
        face.V_basis = SubspaceBasis{Matrix(inst.dim, 0)};
}

/// Affine dimension of {b(gamma) : gamma in F}, from vertex differences and
/// homogeneous ray images.
inline int b_affine_dim(const QcqpInstance& inst, const GammaPolyhedron& gp, const Face& face,
                        double tol = 1e-8) {
    auto b_of = [&](const Vector& g) {
        Vector b = inst.q[0].b;
        for (int i = 1; i <= inst.m(); ++i) b += g(i - 1) * inst.q[static_cast<std::size_t>(i)].b;
        return b;
    };
    auto b_hom = [&](const Vector& g) {
        Vector b = Vector::Zero(inst.dim);
        for (int i = 1; i <= inst.m(); ++i) b += g(i - 1) * inst.q[static_cast<std::size_t>(i)].b;
        return b;
    };
    const int cols = static_cast<int>(face.vertex_ids.size()) - 1 +
                     static_cast<int>(face.ray_ids.size());
    if (cols <= 0) return 0;
    Matrix M(inst.dim, cols);
    int c = 0;
    const Vector b0 = b_of(gp.vertices[static_cast<std::size_t>(face.vertex_ids[0])]);
    for (std::size_t i = 1; i < face.vertex_ids.size(); ++i)
        M.col(c++) = b_of(gp.vertices[static_cast<std::size_t>(face.vertex_ids[i])]) - b0;
    for (int ri : face.ray_ids) M.col(c++) = b_hom(gp.rays[static_cast<std::size_t>(ri)]);
    return matrix_rank(M, tol);
}

namespace detail {

inline int generator_span_dim(const GammaPolyhedron& gp, const Face& face, int m) {
    const int cols = static_cast<int>(face.vertex_ids.size()) - 1 +
                     static_cast<int>(face.ray_ids.size());
    if (cols <= 0) return 0;
    Matrix M(m, cols);
    int c = 0;
    const Vector& v0 = gp.vertices[static_cast<std::size_t>(face.vertex_ids[0])];
    for (std::size_t i = 1; i < face.vertex_ids.size(); ++i)
        M.col(c++) = gp.vertices[static_cast<std::size_t>(face.vertex_ids[i])] - v0;
    for (int ri : face.ray_ids) M.col(c++) = gp.rays[static_cast<std::size_t>(ri)];
    return matrix_rank(M, 1e-9);
}

}  // namespace detail

/// All nonempty faces of Gamma, each as the set of generators sharing a
/// common active row set; includes Gamma itself and the vertices.
inline std::vector<Face> enumerate_faces(const QcqpInstance& inst, const GammaPolyhedron& gp,
                                         const GammaOptions& opt = {}) {
    const int m = inst.m();
    const int nr = static_cast<int>(gp.hrep.size());
    const int nv = static_cast<int>(gp.vertices.size());
    const int nray = static_cast<int>(gp.rays.size());

    // generator active sets
    std::vector<std::vector<bool>> vact(nv, std::vector<bool>(nr, false));
    std::vector<std::vector<bool>> ract(nray, std::vector<bool>(nr, false));
    for (int i = 0; i < nv; ++i)
        for (int r = 0; r < nr; ++r)
            vact[i][r] = std::abs(gp.hrep[r].coeffs.dot(gp.vertices[i]) - gp.hrep[r].rhs) <=
                         opt.tol_active * (1.0 + gp.vertices[i].norm());
    for (int j = 0; j < nray; ++j)
        for (int r = 0; r < nr; ++r)
            ract[j][r] = std::abs(gp.hrep[r].coeffs.dot(gp.rays[j])) <= opt.tol_active;

    using Key = std::pair<std::vector<int>, std::vector<int>>;
    std::map<Key, bool> seen;
    std::vector<Face> faces;

    auto face_from_rows = [&](const std::vector<bool>& rows_on) -> std::optional<Key> {
        std::vector<int> verts, rays;
        for (int i = 0; i < nv; ++i) {
            bool in = true;
            for (int r = 0; r < nr && in; ++r)
                if (rows_on[r] && !vact[i][r]) in = false;
            if (in) verts.push_back(i);
        }
        if (verts.empty()) return std::nullopt;
        for (int j = 0; j < nray; ++j) {
            bool in = true;
            for (int r = 0; r < nr && in; ++r)
                if (rows_on[r] && !ract[j][r]) in = false;
            if (in) rays.push_back(j);
        }
        return Key{verts, rays};
    };

    std::vector<std::vector<bool>> queue;
    queue.push_back(std::vector<bool>(nr, false));
    while (!queue.empty()) {
        const std::vector<bool> rows_on = queue.back();
        queue.pop_back();
        const auto key = face_from_rows(rows_on);
        if (!key) continue;

        // closure: every row active on all members of the face
        std::vector<bool> closure(nr, false);
        for (int r = 0; r < nr; ++r) {
            bool on = true;
            for (int i : key->first)
                if (!vact[i][r]) {
                    on = false;
                    break;
                }
            if (on)
                for (int j : key->second)
                    if (!ract[j][r]) {
                        on = false;
                        break;
                    }
            closure[r] = on;
        }
        if (seen.count(*key)) continue;
        seen[*key] = true;
        if (static_cast<int>(seen.size()) > opt.face_cap)
            throw FaceCapExceededError("enumerate_faces: face cap exceeded");

        Face f;
        f.vertex_ids = key->first;
        f.ray_ids = key->second;
        for (int r = 0; r < nr; ++r)
            if (closure[r]) f.active_rows.push_back(r);
        classify_face(inst, gp, f, opt);
        f.b_affdim = b_affine_dim(inst, gp, f, opt.tol_eig);
        f.affine_dim = detail::generator_span_dim(gp, f, m);
        faces.push_back(std::move(f));

        for (int r = 0; r < nr; ++r) {
            if (closure[r]) continue;
            std::vector<bool> child = closure;
            child[r] = true;
            queue.push_back(std::move(child));
        }
    }

    // maximal semidefinite faces: not strictly contained in another
    // semidefinite face (containment read off the generator sets)
    auto contains = [](const Face& big, const Face& small) {
        return std::includes(big.vertex_ids.begin(), big.vertex_ids.end(),
                             small.vertex_ids.begin(), small.vertex_ids.end()) &&
               std::includes(big.ray_ids.begin(), big.ray_ids.end(),
                             small.ray_ids.begin(), small.ray_ids.end());
    };
    for (Face& f : faces) {
        if (!f.semidefinite) continue;
        f.maximal_semidefinite = true;
        for (const Face& g : faces) {
            if (&g == &f || !g.semidefinite) continue;
            if (contains(g, f) && (g.vertex_ids.size() > f.vertex_ids.size() ||
                                   g.ray_ids.size() > f.ray_ids.size())) {
                f.maximal_semidefinite = false;
                break;
            }
        }
    }
    return faces;
}

/// The face of Gamma achieving sup_gamma q(gamma, x): the argmax vertices
/// plus the rays along which the homogeneous part vanishes. Throws
/// UnboundedSupError when a ray makes the supremum infinite.
inline Face face_of(const QcqpInstance& inst, const GammaPolyhedron& gp,
                    const std::vector<Face>& faces, const Vector& x, double tol = 1e-7) {
    const SupResult s = sup_over_gamma(inst, x, gp, tol);
    if (!s.bounded) throw UnboundedSupError("face_of: supremum over Gamma is unbounded");

    const Face* best = nullptr;
    for (const Face& f : faces) {
        const bool covers =
            std::includes(f.vertex_ids.begin(), f.vertex_ids.end(), s.argmax_vertices.begin(),
                          s.argmax_vertices.end()) &&
            std::includes(f.ray_ids.begin(), f.ray_ids.end(), s.active_rays.begin(),
                          s.active_rays.end());
        if (!covers) continue;
        if (best == nullptr ||
            f.vertex_ids.size() + f.ray_ids.size() < best->vertex_ids.size() + best->ray_ids.size())
            best = &f;
    }
    if (best == nullptr) throw SolverError("face_of: argmax generators match no enumerated face");
    Face out = *best;
    out.witness_x = x;
    return out;
}

}  // namespace qcex
