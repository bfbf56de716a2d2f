// Dense semidefinite programming over products of PSD blocks:
//     min sum_b <C_b, Y_b>   s.t.   sum_b <A_{i,b}, Y_b>  {<=,=}  r_i,
//                                   Y_b >= 0.
// Primal-dual path following with Nesterov-Todd scaling and a Mehrotra
// predictor-corrector step; the Schur complement system is solved by dense
// Cholesky with diagonal regularization. Inequality rows get scalar slack
// blocks internally. Also provides a scalar LP wrapper (nonnegative
// variables as 1x1 blocks) and the rotated-cone embedding used by the SOCP
// relaxation.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qcex/common.hpp"
#include "qcex/linalg.hpp"

namespace qcex {

enum class Sense { LessEqual, Equal };

struct SdpConstraint {
    // one coefficient matrix per block; a 0x0 matrix means the block does
    // not appear in this row
    std::vector<Matrix> coeff;
    Sense sense = Sense::Equal;
    double rhs = 0.0;
};

struct BlockSdp {
    std::vector<int> block_dims;
    std::vector<Matrix> objective;  // one per block, 0x0 for zero
    double objective_offset = 0.0;
    std::vector<SdpConstraint> constraints;

    int add_block(int dim) {
        block_dims.push_back(dim);
        objective.push_back(Matrix());
        for (SdpConstraint& c : constraints) c.coeff.push_back(Matrix());
        return static_cast<int>(block_dims.size()) - 1;
    }

    SdpConstraint make_row(Sense sense, double rhs) const {
        SdpConstraint c;
        c.coeff.resize(block_dims.size());
        c.sense = sense;
        c.rhs = rhs;
        return c;
    }
};

enum class SolveStatus { optimal, infeasible, unbounded, inaccurate };

struct ConicSolution {
    std::vector<Matrix> blocks;  // primal Y_b
    Vector duals;  // Lagrange multiplier per row; >= 0 on <= rows
    double primal_objective = 0.0;  // includes objective_offset
    double dual_objective = 0.0;
    double rel_gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    SolveStatus status = SolveStatus::inaccurate;
    int iterations = 0;
    std::string note;
};

struct SolverOptions {
    double tol_gap = 1e-8;
    double tol_feas = 1e-8;
    double tol_psd = 1e-8;
    int max_iter = 100;
    bool verbose = false;
    // test hook: start the iteration from a given interior triple
    std::optional<std::vector<Matrix>> init_primal;
    std::optional<Vector> init_dual;
    std::optional<std::vector<Matrix>> init_slack;
};

namespace detail {

// factor A = L L^T with L = Q diag(sqrt(lambda)); requires A > 0
inline Matrix psd_factor(const Matrix& A) {
    const EigenDecomposition d = sym_eig(A);
    const int n = static_cast<int>(d.eigenvalues.size());
    Vector s(n);
    for (int i = 0; i < n; ++i) s(i) = std::sqrt(std::max(d.eigenvalues(i), 1e-300));
    return d.eigenvectors * s.asDiagonal();
}

// largest alpha with Y + alpha*D >= 0 (Y > 0), capped at `cap`
inline double max_step(const Matrix& Y, const Matrix& D, double cap) {
    const EigenDecomposition d = sym_eig(Y);
    const int n = static_cast<int>(d.eigenvalues.size());
    Vector inv_s(n);
    for (int i = 0; i < n; ++i)
        inv_s(i) = 1.0 / std::sqrt(std::max(d.eigenvalues(i), 1e-300));
    const Matrix Li = inv_s.asDiagonal() * d.eigenvectors.transpose();
    const double lam_min = min_eigenvalue(Li * D * Li.transpose());
    if (lam_min >= -1e-14) return cap;
    return std::min(cap, -1.0 / lam_min);
}

struct BlockVec {
    std::vector<Matrix> m;

    static BlockVec zero(const std::vector<int>& dims) {
        BlockVec v;
        for (int d : dims) v.m.push_back(Matrix::Zero(d, d));
        return v;
    }
    static BlockVec identity(const std::vector<int>& dims, double scale) {
        BlockVec v;
        for (int d : dims) v.m.push_back(scale * Matrix::Identity(d, d));
        return v;
    }
    double dot(const BlockVec& o) const {
        double s = 0.0;
        for (std::size_t b = 0; b < m.size(); ++b) s += m[b].cwiseProduct(o.m[b]).sum();
        return s;
    }
    double norm() const { return std::sqrt(this->dot(*this)); }
    void axpy(double a, const BlockVec& o) {
        for (std::size_t b = 0; b < m.size(); ++b) m[b] += a * o.m[b];
    }
};

}  // namespace detail

inline ConicSolution solve_sdp(const BlockSdp& sdp, const SolverOptions& opt = {}) {
    using detail::BlockVec;
    const int p = static_cast<int>(sdp.constraints.size());
    const int nb_user = static_cast<int>(sdp.block_dims.size());

    // standard form: append a 1x1 slack block per inequality row
    std::vector<int> dims = sdp.block_dims;
    std::vector<int> slack_block(p, -1);
    for (int i = 0; i < p; ++i)
        if (sdp.constraints[i].sense == Sense::LessEqual) {
            slack_block[i] = static_cast<int>(dims.size());
            dims.push_back(1);
        }
    const int nb = static_cast<int>(dims.size());

    auto expand = [&](const std::vector<Matrix>& user, int slack_of_row) {
        BlockVec v = BlockVec::zero(dims);
        for (int b = 0; b < nb_user; ++b)
            if (user[b].size() > 0) v.m[b] = 0.5 * (user[b] + user[b].transpose());
        if (slack_of_row >= 0) v.m[slack_of_row](0, 0) = 1.0;
        return v;
    };

    BlockVec C = expand(sdp.objective, -1);
    std::vector<BlockVec> A;
    Vector rhs(p);
    for (int i = 0; i < p; ++i) {
        A.push_back(expand(sdp.constraints[i].coeff, slack_block[i]));
        rhs(i) = sdp.constraints[i].rhs;
    }

    double nu = 0.0;
    for (int d : dims) nu += d;

    // identity-scaled interior start from data norms
    double amax = 1.0, bmax = 0.0;
    for (int i = 0; i < p; ++i) {
        amax = std::max(amax, A[i].norm());
        bmax = std::max(bmax, std::abs(rhs(i)));
    }
    const double eta_p = std::max({10.0, std::sqrt(nu), std::sqrt(nu) * bmax / amax});
    const double eta_d = std::max({10.0, std::sqrt(nu), C.norm()});

    BlockVec Y = BlockVec::identity(dims, eta_p);
    BlockVec S = BlockVec::identity(dims, eta_d);
    Vector y = Vector::Zero(p);
    if (opt.init_primal && opt.init_dual && opt.init_slack) {
        for (int b = 0; b < nb_user; ++b) Y.m[b] = (*opt.init_primal)[b];
        y = *opt.init_dual;
        for (int b = 0; b < nb_user; ++b) S.m[b] = (*opt.init_slack)[b];
        for (int i = 0; i < p; ++i)
            if (slack_block[i] >= 0) {
                Y.m[slack_block[i]](0, 0) = std::max(rhs(i) - A[i].dot(Y) + Y.m[slack_block[i]](0, 0), 1e-6);
                S.m[slack_block[i]](0, 0) = std::max(-y(i), 1e-6);
            }
    }

    const double bnorm = 1.0 + rhs.norm();
    const double cnorm = 1.0 + C.norm();

    ConicSolution sol;
    sol.status = SolveStatus::inaccurate;
    double best_err = std::numeric_limits<double>::infinity();
    int stall = 0;

    auto record = [&](const BlockVec& Yr, const Vector& yr, double pin, double din,
                      double gap, int iter) {
        sol.blocks.assign(Yr.m.begin(), Yr.m.begin() + nb_user);
        sol.duals.resize(p);
        for (int i = 0; i < p; ++i) sol.duals(i) = -yr(i);
        sol.primal_objective = C.dot(Yr) + sdp.objective_offset;
        sol.dual_objective = rhs.dot(yr) + sdp.objective_offset;
        sol.rel_gap = gap;
        sol.primal_residual = pin;
        sol.dual_residual = din;
        sol.iterations = iter;
    };

    for (int iter = 0; iter <= opt.max_iter; ++iter) {
        bool finite = std::isfinite(y.sum());
        for (int b = 0; b < nb && finite; ++b)
            finite = Y.m[b].allFinite() && S.m[b].allFinite();
        if (!finite) {
            sol.note = "numerical breakdown";
            return sol;
        }

        Vector rp(p);
        for (int i = 0; i < p; ++i) rp(i) = rhs(i) - A[i].dot(Y);
        BlockVec Rd = C;
        Rd.axpy(-1.0, S);
        for (int i = 0; i < p; ++i) Rd.axpy(-y(i), A[i]);

        const double mu = Y.dot(S) / nu;
        const double pobj = C.dot(Y);
        const double dobj = rhs.dot(y);
        const double obj_scale = 1.0 + std::abs(pobj) + std::abs(dobj);
        const double pin = rp.norm() / bnorm;
        const double din = Rd.norm() / cnorm;
        const double gap = std::abs(pobj - dobj) / obj_scale;
        const double mu_rel = Y.dot(S) / obj_scale;
        const double err = std::max({pin, din, std::min(gap, mu_rel)});
        if (opt.verbose)
            std::fprintf(stderr, "iter %3d  mu %.3e  pobj %+.6e  dobj %+.6e  pin %.2e  din %.2e  gap %.2e\n",
                         iter, mu, pobj, dobj, pin, din, gap);

        if (pin <= opt.tol_feas && din <= opt.tol_feas &&
            (gap <= opt.tol_gap || mu_rel <= opt.tol_gap)) {
            record(Y, y, pin, din, std::min(gap, mu_rel), iter);
            sol.status = SolveStatus::optimal;
            return sol;
        }
        if (err < best_err) {
            best_err = err;
            record(Y, y, pin, din, std::min(gap, mu_rel), iter);
            stall = 0;
        } else if (++stall >= 12) {
            sol.note = "stalled before reaching tolerances";
            return sol;
        }
        if (iter == opt.max_iter) break;
        if (!std::isfinite(mu) || mu > 1e14 || Y.norm() > 1e14) {
            sol.note = "iterates diverged";
            if (pobj < -1e10) sol.status = SolveStatus::unbounded;
            return sol;
        }

        // Nesterov-Todd scaling per block: R^T S R = R^-1 Y R^-T = diag(lam)
        std::vector<Matrix> R(nb), Rinv(nb);
        std::vector<Vector> lam(nb);
        for (int b = 0; b < nb; ++b) {
            const Matrix Ly = detail::psd_factor(Y.m[b]);
            const Matrix Ls = detail::psd_factor(S.m[b]);
            Matrix U, V;
            Vector sig;
            jacobi_svd(Ls.transpose() * Ly, U, sig, V);
            Vector is(sig.size());
            for (int i = 0; i < sig.size(); ++i)
                is(i) = 1.0 / std::sqrt(std::max(sig(i), 1e-300));
            R[b] = Ly * V * is.asDiagonal();
            Rinv[b] = is.asDiagonal() * U.transpose() * Ls.transpose();
            lam[b] = sig;
        }
        auto W_wrap = [&](const BlockVec& X) {  // W X W with W = R R^T
            BlockVec out = BlockVec::zero(dims);
            for (int b = 0; b < nb; ++b)
                out.m[b] = R[b] * (R[b].transpose() * X.m[b] * R[b]) * R[b].transpose();
            return out;
        };

        // Schur complement M_ij = <A_i, W A_j W>
        std::vector<BlockVec> WA(p);
        for (int j = 0; j < p; ++j) WA[j] = W_wrap(A[j]);
        Matrix M(p, p);
        for (int i = 0; i < p; ++i)
            for (int j = i; j < p; ++j) {
                M(i, j) = A[i].dot(WA[j]);
                M(j, i) = M(i, j);
            }

        double reg = 1e-12 * (1.0 + M.diagonal().cwiseAbs().maxCoeff());
        Eigen::LLT<Matrix> llt;
        for (int attempt = 0;; ++attempt) {
            Matrix Mr = M + reg * Matrix::Identity(p, p);
            llt.compute(Mr);
            if (llt.info() == Eigen::Success) break;
            if (attempt >= 8) throw SolverError("conic: KKT system singular after regularization retries");
            reg *= 100.0;
        }

        const BlockVec WRdW = W_wrap(Rd);
        auto solve_direction = [&](const BlockVec& T, Vector& dy, BlockVec& dS, BlockVec& dY) {
            Vector rhs_vec(p);
            for (int i = 0; i < p; ++i) rhs_vec(i) = rp(i) - A[i].dot(T) + A[i].dot(WRdW);
            dy = llt.solve(rhs_vec);
            for (int round = 0; round < 3; ++round) {  // refinement against unregularized M
                const Vector res = rhs_vec - M * dy;
                if (res.norm() <= 1e-15 * (1.0 + rhs_vec.norm())) break;
                dy += llt.solve(res);
            }
            dS = Rd;
            for (int i = 0; i < p; ++i) dS.axpy(-dy(i), A[i]);
            dY = T;
            dY.axpy(-1.0, W_wrap(dS));
        };

        // predictor
        BlockVec T_aff = Y;
        for (int b = 0; b < nb; ++b) T_aff.m[b] = -T_aff.m[b];
        Vector dy_aff;
        BlockVec dS_aff = BlockVec::zero(dims), dY_aff = BlockVec::zero(dims);
        solve_direction(T_aff, dy_aff, dS_aff, dY_aff);

        double ap = 1.0, ad = 1.0;
        for (int b = 0; b < nb; ++b) {
            ap = std::min(ap, detail::max_step(Y.m[b], dY_aff.m[b], 1.0));
            ad = std::min(ad, detail::max_step(S.m[b], dS_aff.m[b], 1.0));
        }
        BlockVec Yt = Y, St = S;
        Yt.axpy(ap, dY_aff);
        St.axpy(ad, dS_aff);
        const double mu_aff = std::max(0.0, Yt.dot(St) / nu);
        double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 1e-12, 1.0);
        // keep centering from outrunning feasibility
        if (std::max(pin, din) > opt.tol_feas && mu_rel < 0.01 * std::max(pin, din))
            sigma = std::max(sigma, 0.5);

        // corrector target in the scaled space, mapped back through R
        BlockVec T = BlockVec::zero(dims);
        for (int b = 0; b < nb; ++b) {
            const Matrix Yt_s = Rinv[b] * dY_aff.m[b] * Rinv[b].transpose();
            const Matrix St_s = R[b].transpose() * dS_aff.m[b] * R[b];
            const Matrix cross = 0.5 * (Yt_s * St_s + St_s * Yt_s);
            const int d = dims[b];
            Matrix G(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double num = -cross(i, j);
                    if (i == j) num += sigma * mu - lam[b](i) * lam[b](i);
                    G(i, j) = num / (0.5 * (lam[b](i) + lam[b](j)));
                }
            T.m[b] = R[b] * 0.5 * (G + G.transpose()) * R[b].transpose();
        }

        Vector dy;
        BlockVec dS = BlockVec::zero(dims), dY = BlockVec::zero(dims);
        solve_direction(T, dy, dS, dY);

        ap = 1.0;
        ad = 1.0;
        for (int b = 0; b < nb; ++b) {
            ap = std::min(ap, 0.99 * detail::max_step(Y.m[b], dY.m[b], 1.0 / 0.99));
            ad = std::min(ad, 0.99 * detail::max_step(S.m[b], dS.m[b], 1.0 / 0.99));
        }
        Y.axpy(ap, dY);
        S.axpy(ad, dS);
        y += ad * dy;
    }

    sol.note = "iteration cap reached";
    return sol;
}

// ---------------------------------------------------------------------------
// scalar LP layer (nonnegative variables as 1x1 blocks)

struct LpRow {
    Vector a;
    Sense sense = Sense::Equal;
    double rhs = 0.0;
};

struct LpSolution {
    Vector x;
    Vector duals;
    double value = 0.0;
    SolveStatus status = SolveStatus::inaccurate;
};

/// min c^T x  s.t.  rows, x >= 0.
inline LpSolution solve_lp(const Vector& c, const std::vector<LpRow>& rows,
                           const SolverOptions& opt = {}) {
    const int n = static_cast<int>(c.size());
    BlockSdp sdp;
    for (int j = 0; j < n; ++j) sdp.add_block(1);
    for (int j = 0; j < n; ++j)
        if (c(j) != 0.0) sdp.objective[j] = Matrix::Constant(1, 1, c(j));
    for (const LpRow& r : rows) {
        SdpConstraint row = sdp.make_row(r.sense, r.rhs);
        for (int j = 0; j < n; ++j)
            if (r.a(j) != 0.0) row.coeff[j] = Matrix::Constant(1, 1, r.a(j));
        sdp.constraints.push_back(row);
    }
    const ConicSolution s = solve_sdp(sdp, opt);
    LpSolution out;
    out.x.resize(n);
    for (int j = 0; j < n; ++j) out.x(j) = s.blocks[j](0, 0);
    out.duals = s.duals;
    out.value = s.primal_objective;
    out.status = s.status;
    return out;
}

// ---------------------------------------------------------------------------
// rotated-cone embedding: one 2x2 PSD block [[w, x],[x, y]] per pair with a
// linking row w = 1; Schur complement of the fixed 1 gives y >= x^2.

struct RotatedConeRef {
    int block = -1;
};

inline std::vector<RotatedConeRef> embed_rotated_cone(BlockSdp& sdp, int pair_count) {
    std::vector<RotatedConeRef> refs;
    for (int j = 0; j < pair_count; ++j) {
        RotatedConeRef ref;
        ref.block = sdp.add_block(2);
        SdpConstraint row = sdp.make_row(Sense::Equal, 1.0);
        Matrix e00 = Matrix::Zero(2, 2);
        e00(0, 0) = 1.0;
        row.coeff[ref.block] = e00;
        sdp.constraints.push_back(row);
        refs.push_back(ref);
    }
    return refs;
}

/// Accumulate coeff * x_j of a rotated-cone pair into a constraint row (or
/// the objective when `row` is the objective vector).
inline void add_cone_x(std::vector<Matrix>& coeffs, const RotatedConeRef& ref, double coeff) {
    if (coeffs[ref.block].size() == 0) coeffs[ref.block] = Matrix::Zero(2, 2);
    coeffs[ref.block](0, 1) += 0.5 * coeff;
    coeffs[ref.block](1, 0) += 0.5 * coeff;
}

inline void add_cone_y(std::vector<Matrix>& coeffs, const RotatedConeRef& ref, double coeff) {
    if (coeffs[ref.block].size() == 0) coeffs[ref.block] = Matrix::Zero(2, 2);
    coeffs[ref.block](1, 1) += coeff;
}

inline double cone_x(const ConicSolution& sol, const RotatedConeRef& ref) {
    return sol.blocks[ref.block](0, 1);
}

inline double cone_y(const ConicSolution& sol, const RotatedConeRef& ref) {
    return sol.blocks[ref.block](1, 1);
}

}  // namespace qcex
