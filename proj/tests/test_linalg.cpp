#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcex/fixtures.hpp"
#include "qcex/linalg.hpp"

using namespace qcex;

TEST_CASE("sym_eig on identity") {
    const EigenDecomposition d = sym_eig(Matrix::Identity(3, 3));
    for (int i = 0; i < 3; ++i) CHECK(d.eigenvalues(i) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig on diag(-1,2) sorts ascending") {
    Vector dg(2);
    dg << -1, 2;
    const EigenDecomposition d = sym_eig(Matrix(dg.asDiagonal()));
    CHECK(d.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(d.eigenvalues(1) == doctest::Approx(2.0));
}

TEST_CASE("sym_eig of the circle-instance constraint form has eigenvalues -sqrt2, sqrt2") {
    // characteristic polynomial of [[1,1],[1,-1]] is l^2 - 2
    Matrix A(2, 2);
    A << 1, 1, 1, -1;
    const EigenDecomposition d = sym_eig(A);
    CHECK(d.eigenvalues(0) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(d.eigenvalues(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("reconstruction property on random symmetric matrices") {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.raw() % 19);  // up to 20
        const Matrix A = rng.symmetric_matrix(n, 2.0);
        const EigenDecomposition d = sym_eig(A);
        const Matrix rec =
            d.eigenvectors * d.eigenvalues.asDiagonal() * d.eigenvectors.transpose();
        CHECK((rec - A).norm() <= 1e-10 * std::max(1.0, A.norm()));
        CHECK((d.eigenvectors.transpose() * d.eigenvectors - Matrix::Identity(n, n)).norm() <=
              1e-10);
    }
}

TEST_CASE("null_space basics") {
    Vector dg(2);
    dg << 0, 1;
    const SubspaceBasis nz = null_space(Matrix(dg.asDiagonal()), 1e-8);
    REQUIRE(nz.dim() == 1);
    CHECK(std::abs(nz.basis(0, 0)) == doctest::Approx(1.0));

    CHECK(null_space(Matrix::Identity(2, 2), 1e-8).dim() == 0);

    // zero matrix: the whole space
    CHECK(null_space(Matrix::Zero(2, 2), 1e-8).dim() == 2);
}

TEST_CASE("psd_check classification") {
    CHECK(psd_check(Matrix::Identity(2, 2)) == Definiteness::positive_definite);
    Vector dg(2);
    dg << 0, 1;
    CHECK(psd_check(Matrix(dg.asDiagonal())) == Definiteness::psd_singular);
    dg << -1, 1;
    CHECK(psd_check(Matrix(dg.asDiagonal())) == Definiteness::indefinite);
}

TEST_CASE("psd_singular implies nontrivial null space at the same tolerance") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.raw() % 5);
        Matrix g = rng.normal_matrix(n, n - 1);
        Matrix A = g * g.transpose();  // PSD and singular
        if (psd_check(A) == Definiteness::psd_singular)
            CHECK(null_space(A).dim() >= 1);
    }
}

TEST_CASE("projection from a subspace basis is idempotent") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng.raw() % 6);
        Matrix g = rng.normal_matrix(n, n - 2);
        const SubspaceBasis nz = null_space(Matrix(g * g.transpose()));
        const Matrix P = nz.basis * nz.basis.transpose();
        CHECK((P * P - P).norm() <= 1e-10);
    }
}

TEST_CASE("kernel_basis solves homogeneous rectangular systems") {
    Matrix M(2, 4);
    M << 1, 0, 1, 0, 0, 1, 0, 1;
    const SubspaceBasis k = kernel_basis(M);
    REQUIRE(k.dim() == 2);
    CHECK((M * k.basis).norm() <= 1e-12);
}

TEST_CASE("inverse_sqrt squares back to the inverse") {
    Rng rng(11);
    Matrix g = rng.normal_matrix(4, 4);
    Matrix A = g * g.transpose() + Matrix::Identity(4, 4);
    const Matrix R = inverse_sqrt(A);
    CHECK((R * A * R - Matrix::Identity(4, 4)).norm() <= 1e-10);
}
