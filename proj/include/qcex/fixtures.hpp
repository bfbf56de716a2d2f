// Built-in instances: the worked examples and sharpness constructions used
// as regression fixtures, plus seeded random generators (vectorized
// quadratic matrix programs and diagonal instances) for property suites.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "qcex/common.hpp"
#include "qcex/model.hpp"

namespace qcex {

// Deterministic RNG wrapper; normal variates via Box-Muller so streams do not
// depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // [0, 1)
        return (engine_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 1e-300);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * M_PI * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    Vector normal_vector(int n) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v(i) = normal();
        return v;
    }

    Matrix normal_matrix(int rows, int cols) {
        Matrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = normal();
        return m;
    }

    Matrix symmetric_matrix(int n, double scale = 1.0) {
        Matrix g = normal_matrix(n, n);
        return scale * 0.5 * (g + g.transpose());
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

namespace fixtures {

inline QcqpInstance k2_example() {
    // min -|x|^2  s.t.  x1^2 - x2^2 + x3^2 - x4^2 <= 1,
    //                   2x1^2 + x2^2 + 2x3^2 + x4^2 <= 1   (in R^4)
    QcqpInstance inst;
    inst.name = "k2-example";
    inst.dim = 4;
    inst.ineq_count = 2;
    inst.eq_count = 0;
    Vector d0(4), d1(4), d2(4);
    d0 << -1, -1, -1, -1;
    d1 << 1, -1, 1, -1;
    d2 << 2, 1, 2, 1;
    inst.q.push_back({Matrix(d0.asDiagonal()), Vector::Zero(4), 0.0});
    inst.q.push_back({Matrix(d1.asDiagonal()), Vector::Zero(4), -1.0});
    inst.q.push_back({Matrix(d2.asDiagonal()), Vector::Zero(4), -1.0});
    return inst;
}

inline QcqpInstance b_zero() {
    // min x1^2 + x2^2 + 10 x1  s.t.  x1^2 - x2^2 <= 5,  -x1^2 + x2^2 <= 50
    QcqpInstance inst;
    inst.name = "b-zero";
    inst.dim = 2;
    inst.ineq_count = 2;
    inst.eq_count = 0;
    Vector b0(2);
    b0 << 5, 0;
    Vector d1(2), d2(2);
    d1 << 1, -1;
    d2 << -1, 1;
    inst.q.push_back({Matrix::Identity(2, 2), b0, 0.0});
    inst.q.push_back({Matrix(d1.asDiagonal()), Vector::Zero(2), -5.0});
    inst.q.push_back({Matrix(d2.asDiagonal()), Vector::Zero(2), -50.0});
    return inst;
}

inline QcqpInstance gamma_ineq_triangle() {
    // Non-simultaneously-diagonalizable forms whose multiplier set is the
    // triangle {gamma >= 0, gamma_1 + gamma_2 <= 1}; ships with an asserted
    // H-representation in the instance file.
    QcqpInstance inst;
    inst.name = "gamma-ineq-triangle";
    inst.dim = 3;
    inst.ineq_count = 2;
    inst.eq_count = 0;
    const double r2 = std::sqrt(2.0);
    Matrix A0(3, 3), A1(3, 3), A2(3, 3);
    A0 << 1, 0, 0, 0, r2, 0, 0, 0, r2;
    A1 << -1, 0, 0, 0, 1, 1, 0, 1, -1;
    A2 << -1, 0, 0, 0, 1, -1, 0, -1, -1;
    inst.q.push_back({A0, Vector::Zero(3), 0.0});
    inst.q.push_back({A1, Vector::Zero(3), -1.0});
    inst.q.push_back({A2, Vector::Zero(3), -1.0});
    return inst;
}

inline QcqpInstance polyhedral_sharp(int n, int k) {
    // min -(x_1^2 + x_{n+1}^2 + ... + x_{(k-1)n+1}^2)
    // s.t. |x|^2 <= 1,  x_{(j-1)n+1} = 0 for j in [k].   N = nk, m = k+1.
    QcqpInstance inst;
    inst.name = "polyhedral-sharp";
    const int N = n * k;
    inst.dim = N;
    inst.ineq_count = 1;
    inst.eq_count = k;
    Matrix A0 = Matrix::Zero(N, N);
    for (int j = 0; j < k; ++j) A0(j * n, j * n) = -1.0;
    inst.q.push_back({A0, Vector::Zero(N), 0.0});
    inst.q.push_back({Matrix::Identity(N, N), Vector::Zero(N), -1.0});
    for (int j = 0; j < k; ++j) {
        Vector b = Vector::Zero(N);
        b(j * n) = 0.5;  // 2 b^T x = x_{(j-1)n+1}
        inst.q.push_back({Matrix::Zero(N, N), b, 0.0});
    }
    return inst;
}

inline QcqpInstance circle_sharp() {
    // min |x - e1|^2  s.t.  x1^2 - x2^2 + 2x1x2 = 0,  x1^2 - x2^2 - 2x1x2 = 0.
    // The multiplier set is a disk, not a polyhedron; the relaxation has a gap.
    QcqpInstance inst;
    inst.name = "circle-sharp";
    inst.dim = 2;
    inst.ineq_count = 0;
    inst.eq_count = 2;
    Matrix A1(2, 2), A2(2, 2);
    A1 << 1, 1, 1, -1;
    A2 << 1, -1, -1, -1;
    Vector b0(2);
    b0 << -1, 0;
    inst.q.push_back({Matrix::Identity(2, 2), b0, 1.0});
    inst.q.push_back({A1, Vector::Zero(2), 0.0});
    inst.q.push_back({A2, Vector::Zero(2), 0.0});
    return inst;
}

inline QcqpInstance optimality() {
    // min x1^2 + x2^2  s.t.  x1^2 - x2^2 <= 0,  2x2 <= 0.
    // Objective tightness holds but the projected epigraphs differ.
    QcqpInstance inst;
    inst.name = "optimality";
    inst.dim = 2;
    inst.ineq_count = 2;
    inst.eq_count = 0;
    Vector d1(2);
    d1 << 1, -1;
    Vector b2(2);
    b2 << 0, 1;
    inst.q.push_back({Matrix::Identity(2, 2), Vector::Zero(2), 0.0});
    inst.q.push_back({Matrix(d1.asDiagonal()), Vector::Zero(2), 0.0});
    inst.q.push_back({Matrix::Zero(2, 2), b2, 0.0});
    return inst;
}

inline QcqpInstance separating_by() {
    // min -|x|^2  s.t.  |x - e1|^2 <= 1,  |x - e2|^2 <= 1.
    QcqpInstance inst;
    inst.name = "separating-by";
    inst.dim = 2;
    inst.ineq_count = 2;
    inst.eq_count = 0;
    Vector b1(2), b2(2);
    b1 << -1, 0;
    b2 << 0, -1;
    inst.q.push_back({-Matrix::Identity(2, 2), Vector::Zero(2), 0.0});
    inst.q.push_back({Matrix::Identity(2, 2), b1, 0.0});
    inst.q.push_back({Matrix::Identity(2, 2), b2, 0.0});
    return inst;
}

/// Vectorized quadratic matrix program: every form is I_k (x) cal_A_i with
/// cal_A_i of size n, linear terms come from column-stacked n x k matrices.
/// Constraint 1 is a strictly convex inequality making the data satisfy the
/// definiteness assumption; the origin is strictly feasible.
inline QcqpInstance qmp(int n, int k, int m, std::uint64_t seed) {
    QcqpInstance inst;
    inst.name = "qmp";
    const int N = n * k;
    inst.dim = N;
    inst.ineq_count = m;
    inst.eq_count = 0;
    Rng rng(split_seed(seed, 0x9a71));

    auto lift = [&](const Matrix& small) {
        Matrix big = Matrix::Zero(N, N);
        for (int l = 0; l < k; ++l) big.block(l * n, l * n, n, n) = small;
        return big;
    };
    auto vec_b = [&](const Matrix& B) {  // B is n x k, column-stacked
        Vector b(N);
        for (int t = 0; t < k; ++t)
            for (int s = 0; s < n; ++s) b(t * n + s) = B(s, t);
        return b;
    };

    // objective: indefinite form, nonzero linear term
    Matrix cal0 = rng.symmetric_matrix(n, 1.0);
    inst.q.push_back({lift(cal0), vec_b(0.3 * rng.normal_matrix(n, k)), 0.0});

    // constraint 1: x in a centered ellipsoid, cal_A_1 >= I
    Matrix g = rng.normal_matrix(n, n);
    Matrix cal1 = g * g.transpose() / static_cast<double>(n) + Matrix::Identity(n, n);
    inst.q.push_back({lift(cal1), Vector::Zero(N), -1.0});

    for (int i = 2; i <= m; ++i) {
        Matrix cali = rng.symmetric_matrix(n, 0.5);
        Vector bi = vec_b(0.2 * rng.normal_matrix(n, k));
        const double ci = -(0.5 + std::abs(rng.normal()));
        inst.q.push_back({lift(cali), bi, ci});
    }
    return inst;
}

/// Random diagonal instance for the property suites. Constraint 1 is a unit
/// ball so the definiteness assumption always holds; remaining constraints
/// have random diagonal forms with sparse linear terms and keep the origin
/// strictly feasible.
inline QcqpInstance random_diagonal(int N, int m_extra, bool with_equality,
                                    double b_scale, std::uint64_t seed) {
    QcqpInstance inst;
    inst.name = "random-diagonal";
    inst.dim = N;
    Rng rng(split_seed(seed, 0x51d7));

    Vector d0 = rng.normal_vector(N);
    inst.q.push_back({Matrix(d0.asDiagonal()), b_scale * rng.normal_vector(N), 0.0});
    inst.q.push_back({Matrix::Identity(N, N), Vector::Zero(N), -1.0});

    const int eqs = with_equality ? 1 : 0;
    inst.ineq_count = 1 + m_extra - eqs;
    inst.eq_count = eqs;
    for (int i = 0; i < m_extra; ++i) {
        Vector di = rng.normal_vector(N);
        Vector bi = Vector::Zero(N);
        for (int j = 0; j < N; ++j)
            if (rng.uniform() < 0.3) bi(j) = b_scale * rng.normal();
        const bool eq = with_equality && (i == m_extra - 1);
        const double ci = eq ? 0.0 : -(0.3 + std::abs(rng.normal()));
        inst.q.push_back({Matrix(di.asDiagonal()), bi, ci});
    }
    // inequalities come before equalities already by construction
    return inst;
}

// deterministic fixtures for the corollary regression classes

inline QcqpInstance convex_qcqp() {
    QcqpInstance inst;
    inst.name = "convex-qcqp";
    inst.dim = 2;
    inst.ineq_count = 2;
    inst.eq_count = 0;
    Matrix A0(2, 2), A1(2, 2);
    A0 << 2.0, 0.3, 0.3, 1.0;
    A1 << 1.0, 0.2, 0.2, 1.0;
    Vector b0(2), b1(2);
    b0 << 0.5, -0.25;
    b1 << 0.1, 0.0;
    inst.q.push_back({A0, b0, 0.0});
    inst.q.push_back({A1, b1, -1.0});
    inst.q.push_back({Matrix::Identity(2, 2), Vector::Zero(2), -4.0});
    return inst;
}

inline QcqpInstance gtrs() {
    // single nonconvex inequality constraint
    QcqpInstance inst;
    inst.name = "gtrs";
    inst.dim = 2;
    inst.ineq_count = 1;
    inst.eq_count = 0;
    Vector d0(2);
    d0 << 1, -1;
    Vector b0(2);
    b0 << 0.5, 0.0;
    inst.q.push_back({Matrix(d0.asDiagonal()), b0, 0.0});
    inst.q.push_back({Matrix::Identity(2, 2), Vector::Zero(2), -1.0});
    return inst;
}

inline QcqpInstance alpha_identity() {
    // every form a multiple of the identity, m = 2 <= N = 3
    QcqpInstance inst;
    inst.name = "alpha-id";
    inst.dim = 3;
    inst.ineq_count = 2;
    inst.eq_count = 0;
    Vector b0(3), b1(3);
    b0 << 0.0, 0.3, 0.0;
    b1 << 0.1, 0.0, 0.0;
    inst.q.push_back({Matrix::Identity(3, 3), b0, 0.0});
    inst.q.push_back({-Matrix::Identity(3, 3), b1, 0.25});
    inst.q.push_back({2.0 * Matrix::Identity(3, 3), Vector::Zero(3), -8.0});
    return inst;
}

}  // namespace fixtures
}  // namespace qcex
