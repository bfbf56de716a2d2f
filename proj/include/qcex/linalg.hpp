// Dense symmetric linear algebra kernel: cyclic-Jacobi eigendecomposition,
// null spaces, and definiteness tests. Everything downstream builds on these
// three primitives, so they are kept dependency-free and deterministic.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qcex/common.hpp"

namespace qcex {

struct EigenDecomposition {
    Vector eigenvalues;   // ascending
    Matrix eigenvectors;  // orthonormal columns, A = Q diag(w) Q^T
};

struct SubspaceBasis {
    Matrix basis;  // n x d, orthonormal columns
    int dim() const { return static_cast<int>(basis.cols()); }
};

enum class Definiteness { positive_definite, psd_singular, indefinite };

namespace detail {

// One cyclic Jacobi sweep over all off-diagonal pairs.
inline double jacobi_sweep(Matrix& a, Matrix& q) {
    const int n = static_cast<int>(a.rows());
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p) {
        for (int r = p + 1; r < n; ++r) {
            const double apr = a(p, r);
            if (apr == 0.0) continue;
            const double app = a(p, p);
            const double arr = a(r, r);
            const double tau = (arr - app) / (2.0 * apr);
            // smaller-magnitude root for stability
            const double t = (tau >= 0.0)
                ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;
            for (int k = 0; k < n; ++k) {
                const double akp = a(k, p);
                const double akr = a(k, r);
                a(k, p) = c * akp - s * akr;
                a(k, r) = s * akp + c * akr;
            }
            for (int k = 0; k < n; ++k) {
                const double apk = a(p, k);
                const double ark = a(r, k);
                a(p, k) = c * apk - s * ark;
                a(r, k) = s * apk + c * ark;
            }
            for (int k = 0; k < n; ++k) {
                const double qkp = q(k, p);
                const double qkr = q(k, r);
                q(k, p) = c * qkp - s * qkr;
                q(k, r) = s * qkp + c * qkr;
            }
        }
    }
    for (int p = 0; p < n - 1; ++p)
        for (int r = p + 1; r < n; ++r) off += a(p, r) * a(p, r);
    return std::sqrt(2.0 * off);
}

}  // namespace detail

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues are returned in ascending order. Throws SolverError if the
/// off-diagonal norm has not collapsed after 100 sweeps.
inline EigenDecomposition sym_eig(const Matrix& A) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n) throw DimensionError("sym_eig: matrix not square");
    Matrix a = 0.5 * (A + A.transpose());
    Matrix q = Matrix::Identity(n, n);
    const double scale = std::max(1.0, a.norm());
    if (n > 1) {
        bool converged = false;
        for (int sweep = 0; sweep < 100; ++sweep) {
            const double off = detail::jacobi_sweep(a, q);
            if (off <= 1e-15 * scale) {
                converged = true;
                break;
            }
        }
        if (!converged) throw SolverError("sym_eig: Jacobi did not converge in 100 sweeps");
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i) < a(j, j); });

    EigenDecomposition dec;
    dec.eigenvalues.resize(n);
    dec.eigenvectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        dec.eigenvalues(i) = a(order[i], order[i]);
        dec.eigenvectors.col(i) = q.col(order[i]);
    }
    return dec;
}

/// Basis of the near-null space of a symmetric matrix: the span of
/// eigenvectors with |lambda| <= tol * max(1, |lambda|_max).
inline SubspaceBasis null_space(const Matrix& A, double tol = 1e-8) {
    const EigenDecomposition dec = sym_eig(A);
    const int n = static_cast<int>(dec.eigenvalues.size());
    const double lam_max = (n > 0) ? dec.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    const double cut = tol * std::max(1.0, lam_max);
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (std::abs(dec.eigenvalues(i)) <= cut) keep.push_back(i);
    SubspaceBasis sb;
    sb.basis.resize(n, static_cast<int>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        sb.basis.col(static_cast<int>(j)) = dec.eigenvectors.col(keep[j]);
    return sb;
}

/// Classify a symmetric matrix by its minimum eigenvalue against
/// +-tol * max(1, |lambda|_max).
inline Definiteness psd_check(const Matrix& A, double tol = 1e-8) {
    const EigenDecomposition dec = sym_eig(A);
    const int n = static_cast<int>(dec.eigenvalues.size());
    const double lam_min = (n > 0) ? dec.eigenvalues(0) : 0.0;
    const double lam_max = (n > 0) ? dec.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    const double cut = tol * std::max(1.0, lam_max);
    if (lam_min > cut) return Definiteness::positive_definite;
    if (lam_min >= -cut) return Definiteness::psd_singular;
    return Definiteness::indefinite;
}

inline double min_eigenvalue(const Matrix& A) {
    const EigenDecomposition dec = sym_eig(A);
    return dec.eigenvalues.size() > 0 ? dec.eigenvalues(0) : 0.0;
}

/// One-sided Jacobi SVD of a p x q matrix: K = U diag(sigma) V^T with
/// orthonormal V (q x q), sigma >= 0, and U columns orthonormal where the
/// singular value is nonzero. Avoids forming Gram matrices, so tiny
/// singular values come out at full precision.
inline void jacobi_svd(Matrix K, Matrix& U, Vector& sigma, Matrix& V) {
    const int q = static_cast<int>(K.cols());
    V = Matrix::Identity(q, q);
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < q - 1; ++i) {
            for (int j = i + 1; j < q; ++j) {
                const double a = K.col(i).squaredNorm();
                const double b = K.col(j).squaredNorm();
                const double c = K.col(i).dot(K.col(j));
                if (std::abs(c) <= 1e-300) continue;
                off = std::max(off, std::abs(c) / std::sqrt(std::max(a * b, 1e-300)));
                const double zeta = (b - a) / (2.0 * c);
                const double t = ((zeta >= 0.0) ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (int r = 0; r < K.rows(); ++r) {
                    const double ki = K(r, i), kj = K(r, j);
                    K(r, i) = cs * ki - sn * kj;
                    K(r, j) = sn * ki + cs * kj;
                }
                for (int r = 0; r < q; ++r) {
                    const double vi = V(r, i), vj = V(r, j);
                    V(r, i) = cs * vi - sn * vj;
                    V(r, j) = sn * vi + cs * vj;
                }
            }
        }
        if (off < 1e-15) break;
    }
    sigma.resize(q);
    U.resize(K.rows(), q);
    for (int i = 0; i < q; ++i) {
        sigma(i) = K.col(i).norm();
        U.col(i) = (sigma(i) > 0.0) ? Vector(K.col(i) / sigma(i)) : Vector(Vector::Zero(K.rows()));
    }
}

/// Orthonormal column basis of the range of M at a relative singular value
/// cut (tol * max(1, sigma_max)).
inline SubspaceBasis range_basis(const Matrix& M, double tol = 1e-10) {
    Matrix U, V;
    Vector sigma;
    jacobi_svd(M, U, sigma, V);
    const double smax = (sigma.size() > 0) ? sigma.maxCoeff() : 0.0;
    const double cut = tol * std::max(1.0, smax);
    std::vector<int> keep;
    for (int i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cut) keep.push_back(i);
    SubspaceBasis sb;
    sb.basis.resize(M.rows(), static_cast<int>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        sb.basis.col(static_cast<int>(j)) = U.col(keep[j]);
    return sb;
}

/// Numerical rank of a rectangular matrix at a relative singular value cut.
inline int matrix_rank(const Matrix& M, double tol = 1e-8) {
    if (M.rows() == 0 || M.cols() == 0) return 0;
    Matrix U, V;
    Vector sigma;
    jacobi_svd(M, U, sigma, V);
    const double cut = tol * std::max(1.0, sigma.maxCoeff());
    int r = 0;
    for (int i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cut) ++r;
    return r;
}

/// Orthonormal basis of {z : M z = 0} for a general rectangular M.
inline SubspaceBasis kernel_basis(const Matrix& M, double tol = 1e-10) {
    const int d = static_cast<int>(M.cols());
    if (M.rows() == 0) {
        SubspaceBasis sb;
        sb.basis = Matrix::Identity(d, d);
        return sb;
    }
    Matrix U, V;
    Vector sigma;
    jacobi_svd(M, U, sigma, V);
    const double cut = tol * std::max(1.0, sigma.maxCoeff());
    std::vector<int> keep;
    for (int i = 0; i < d; ++i)
        if (sigma(i) <= cut) keep.push_back(i);
    SubspaceBasis sb;
    sb.basis.resize(d, static_cast<int>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        sb.basis.col(static_cast<int>(j)) = V.col(keep[j]);
    return sb;
}

/// Symmetric inverse square root, valid for positive definite input.
inline Matrix inverse_sqrt(const Matrix& A) {
    const EigenDecomposition dec = sym_eig(A);
    const int n = static_cast<int>(dec.eigenvalues.size());
    Vector d(n);
    for (int i = 0; i < n; ++i) {
        if (dec.eigenvalues(i) <= 0.0)
            throw SolverError("inverse_sqrt: matrix not positive definite");
        d(i) = 1.0 / std::sqrt(dec.eigenvalues(i));
    }
    return dec.eigenvectors * d.asDiagonal() * dec.eigenvectors.transpose();
}

}  // namespace qcex
