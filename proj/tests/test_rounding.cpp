#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcex/oracle.hpp"
#include "qcex/rounding.hpp"

using namespace qcex;

namespace {

struct Prepared {
    QcqpInstance inst;
    GammaPolyhedron gp;
    std::vector<Face> faces;
};

Prepared prepare(const QcqpInstance& inst) {
    Prepared p;
    p.inst = inst;
    p.gp = build_gamma(p.inst);
    p.faces = enumerate_faces(p.inst, p.gp);
    return p;
}

SolverOptions tight_solver() {
    SolverOptions o;
    o.tol_gap = 1e-9;
    o.tol_feas = 1e-8;
    return o;
}

}  // namespace

TEST_CASE("tighten_t evaluates the generator supremum") {
    SUBCASE("tightness-without-hull example at (1,0)") {
        const Prepared p = prepare(fixtures::optimality());
        Vector x(2);
        x << 1, 0;
        // q(gamma, x) = 1 + gamma_1 over [0,1] x R+, so sup = 2 and t = 1
        CHECK(tighten_t(p.inst, p.gp, x) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("origin of the homogeneous-constraint example") {
        const Prepared p = prepare(fixtures::b_zero());
        CHECK(tighten_t(p.inst, p.gp, Vector::Zero(2)) == doctest::Approx(0.0));
    }
    SUBCASE("active ray with positive homogeneous value") {
        const Prepared p = prepare(fixtures::optimality());
        Vector x(2);
        x << 0, 1;
        CHECK_THROWS_AS(tighten_t(p.inst, p.gp, x), UnboundedSupError);
    }
}

TEST_CASE("extraction at a definite argmax face") {
    SUBCASE("separating example recovers the feasible optimizer") {
        const Prepared p = prepare(fixtures::separating_by());
        const ShorSolution sol = solve_shor(p.inst, tight_solver());
        REQUIRE(sol.status == SolveStatus::optimal);
        const ExtractionResult res = extract_if_definite(p.inst, p.gp, p.faces, sol);
        REQUIRE(res.point.has_value());
        CHECK(evaluate(p.inst, 0, res.point->x) == doctest::Approx(-2.0).epsilon(1e-5));
        CHECK(feasibility_residual(p.inst, res.point->x) <= 1e-5);
    }
    SUBCASE("convex instances always extract") {
        const Prepared p = prepare(fixtures::convex_qcqp());
        const ShorSolution sol = solve_shor(p.inst, tight_solver());
        REQUIRE(sol.status == SolveStatus::optimal);
        const ExtractionResult res = extract_if_definite(p.inst, p.gp, p.faces, sol);
        CHECK(res.point.has_value());
    }
    SUBCASE("tightness-without-hull example extracts at the origin") {
        const Prepared p = prepare(fixtures::optimality());
        const ShorSolution sol = solve_shor(p.inst, tight_solver());
        REQUIRE(sol.status == SolveStatus::optimal);
        const ExtractionResult res = extract_if_definite(p.inst, p.gp, p.faces, sol);
        REQUIRE(res.point.has_value());
        CHECK(res.point->x.norm() <= 1e-4);
        CHECK_FALSE(res.face.semidefinite);
    }
    SUBCASE("sharpness instance lands on a semidefinite face and does not extract") {
        const Prepared p = prepare(fixtures::polyhedral_sharp(2, 1));
        const ShorSolution sol = solve_shor(p.inst, tight_solver());
        REQUIRE(sol.status == SolveStatus::optimal);
        const ExtractionResult res = extract_if_definite(p.inst, p.gp, p.faces, sol);
        CHECK_FALSE(res.point.has_value());
        CHECK(res.face.semidefinite);
    }
}

TEST_CASE("pivoting decomposition on a hand-derived boundary point") {
    // at x = (3, 0) the supremum is achieved by the single vertex (1,0) of
    // the multiplier triangle, a semidefinite face with direction e2; the
    // first crossings sit exactly at alpha = +-2
    const Prepared p = prepare(fixtures::b_zero());
    Vector x(2);
    x << 3, 0;
    const double t = tighten_t(p.inst, p.gp, x);
    CHECK(t == doctest::Approx(21.5));  // (q_0 + q_1)(3,0) = 43

    const ConvexDecomposition dec = pivot_decompose(p.inst, p.gp, p.faces, {x, t});
    REQUIRE(dec.points.size() == 2);
    CHECK(dec.weights[0] == doctest::Approx(0.5));
    CHECK(dec.weights[1] == doctest::Approx(0.5));
    REQUIRE(dec.trace.size() == 1);
    CHECK(std::abs(dec.trace[0].alpha_plus - 2.0) <= 1e-9);
    CHECK(std::abs(dec.trace[0].alpha_minus + 2.0) <= 1e-9);

    const DecompositionReport rep = verify_decomposition(p.inst, dec, {x, t});
    CHECK(rep.ok);
    CHECK(rep.reconstruction_error <= 1e-8);

    // face dimension strictly grows across the pivot
    CHECK(dec.trace[0].face_affdim_after_pos > dec.trace[0].face_affdim_before);
    CHECK(dec.trace[0].face_affdim_after_neg > dec.trace[0].face_affdim_before);
}

TEST_CASE("pivoting is the identity on definite-face points") {
    const Prepared p = prepare(fixtures::b_zero());
    const ConvexDecomposition dec =
        pivot_decompose(p.inst, p.gp, p.faces, {Vector::Zero(2), 0.0});
    REQUIRE(dec.points.size() == 1);
    CHECK(dec.weights[0] == doctest::Approx(1.0));
    CHECK(dec.points[0].x.norm() <= 1e-12);
}

TEST_CASE("pivoting refuses points outside the hull hypothesis") {
    const Prepared p = prepare(fixtures::optimality());
    Vector x(2);
    x << 1, 0;
    SUBCASE("point of the projected epigraph outside the hull: no direction exists") {
        CHECK_THROWS_AS(pivot_decompose(p.inst, p.gp, p.faces, {x, 1.0}),
                        NoNonzeroDirectionError);
    }
    SUBCASE("point below the projected epigraph is rejected up front") {
        CHECK_THROWS_AS(pivot_decompose(p.inst, p.gp, p.faces, {x, 0.4}),
                        FeasibilityViolatedError);
    }
}

TEST_CASE("pivoting a lifted input point keeps the reconstruction exact") {
    const Prepared p = prepare(fixtures::b_zero());
    Vector x(2);
    x << 3, 0;
    const double t = tighten_t(p.inst, p.gp, x) + 0.7;  // strictly above the boundary
    const ConvexDecomposition dec = pivot_decompose(p.inst, p.gp, p.faces, {x, t});
    const DecompositionReport rep = verify_decomposition(p.inst, dec, {x, t});
    CHECK(rep.ok);
}

TEST_CASE("block-compression identity behind the purification") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.raw() % 3);
        const int k = 1 + static_cast<int>(rng.raw() % 3);
        const int N = n * k;
        const Matrix cal = rng.symmetric_matrix(n);
        Matrix lifted = Matrix::Zero(N, N);
        for (int l = 0; l < k; ++l) lifted.block(l * n, l * n, n, n) = cal;
        const Matrix Mfull = rng.symmetric_matrix(N);
        Matrix compressed = Matrix::Zero(n, n);
        for (int l = 0; l < k; ++l) compressed += Mfull.block(l * n, l * n, n, n);
        CHECK(lifted.cwiseProduct(Mfull).sum() ==
              doctest::Approx(cal.cwiseProduct(compressed).sum()).epsilon(1e-12));
    }
}

TEST_CASE("hull-variant purification on a matrix-program fixture") {
    const QcqpInstance inst = fixtures::qmp(2, 4, 2, 11);
    const MultiplicityReport k = detect_k(inst);
    REQUIRE(k.k == 4);
    const ShorSolution sol = solve_shor(inst, tight_solver());
    REQUIRE(sol.status == SolveStatus::optimal);

    const ConvexDecomposition dec = purify_rank_reduction(inst, k, sol, PurifyVariant::hull);
    CHECK(dec.points.size() >= 1);
    const DecompositionReport rep =
        verify_decomposition(inst, dec, {sol.x, 0.5 * sol.opt_sdp}, 1e-6);
    CHECK(rep.ok);
    CHECK(rep.reconstruction_error <= 1e-8);
    CHECK(rep.worst_leaf_residual <= 1e-6);

    // conservation at every split: the imposed gradients annihilate the step
    // and the split vector's quadratic matches the rank-one compression
    for (const DecompositionStep& step : dec.trace) {
        Vector yz(inst.dim);
        const int n = inst.dim / k.k;
        for (int l = 0; l < k.k; ++l) yz.segment(l * n, n) = step.split_y(l) * step.split_z;
        for (int i = 0; i <= inst.m(); ++i) {
            const Quadratic& qi = inst.q[i];
            const double first = (qi.A * step.split_x + qi.b).dot(yz);
            if (i > 0) CHECK(std::abs(first) <= 1e-9);
            const double quad = yz.dot(qi.A * yz);
            const double comp = step.split_z.dot(k.base_forms[i] * step.split_z);
            CHECK(quad == doctest::Approx(comp).epsilon(1e-9));
        }
    }
}

TEST_CASE("optimal-slice purification keeps the objective pinned") {
    const QcqpInstance inst = fixtures::qmp(2, 3, 2, 19);
    const MultiplicityReport k = detect_k(inst);
    REQUIRE(k.k == 3);
    const ShorSolution sol = solve_shor(inst, tight_solver());
    REQUIRE(sol.status == SolveStatus::optimal);

    const ConvexDecomposition dec =
        purify_rank_reduction(inst, k, sol, PurifyVariant::optimal_slice);
    const DecompositionReport rep =
        verify_decomposition(inst, dec, {sol.x, 0.5 * sol.opt_sdp}, 1e-6);
    CHECK(rep.ok);
    for (const EpigraphPoint& leaf : dec.points)
        CHECK(std::abs(2.0 * leaf.t - sol.opt_sdp) <= 1e-6);
    for (const DecompositionStep& step : dec.trace)
        CHECK(std::abs(step.first_order_term) <= 1e-7);
}

TEST_CASE("rank-zero certificate returns the point itself") {
    const QcqpInstance inst = fixtures::qmp(2, 4, 2, 23);
    const MultiplicityReport k = detect_k(inst);
    // a synthetic rank-one moment solution at a feasible point
    ShorSolution sol;
    sol.status = SolveStatus::optimal;
    sol.x = Vector::Zero(inst.dim);
    sol.X = sol.x * sol.x.transpose();
    sol.opt_sdp = evaluate(inst, 0, sol.x);
    const ConvexDecomposition dec = purify_rank_reduction(inst, k, sol, PurifyVariant::hull);
    REQUIRE(dec.points.size() == 1);
    CHECK(dec.weights[0] == doctest::Approx(1.0));
    CHECK(dec.trace.empty());
}

TEST_CASE("purification preconditions are enforced") {
    const QcqpInstance inst = fixtures::qmp(2, 2, 2, 29);
    const MultiplicityReport k = detect_k(inst);
    ShorSolution sol;
    sol.x = Vector::Zero(inst.dim);
    sol.X = Matrix::Identity(inst.dim, inst.dim);
    sol.opt_sdp = 0.0;
    CHECK_THROWS_AS(purify_rank_reduction(inst, k, sol, PurifyVariant::hull),
                    SystemInfeasibleError);
    // k = 2 < m + 1 = 3 rejects the slice variant as well
    CHECK_THROWS_AS(purify_rank_reduction(inst, k, sol, PurifyVariant::optimal_slice),
                    SystemInfeasibleError);
}
