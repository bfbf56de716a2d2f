#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcex/shor.hpp"

using namespace qcex;

namespace {
OracleOptions fast_oracle() {
    OracleOptions o;
    o.starts = 48;
    return o;
}
}  // namespace

TEST_CASE("build_shor block and row structure") {
    const BlockSdp circle = build_shor(fixtures::circle_sharp());
    REQUIRE(circle.block_dims.size() == 1);
    CHECK(circle.block_dims[0] == 3);
    REQUIRE(circle.constraints.size() == 3);  // pin + 2 equalities
    CHECK(circle.constraints[1].sense == Sense::Equal);
    CHECK(circle.constraints[2].sense == Sense::Equal);

    const BlockSdp sep = build_shor(fixtures::separating_by());
    CHECK(sep.block_dims[0] == 3);
    CHECK(sep.constraints[1].sense == Sense::LessEqual);
    CHECK(sep.constraints[2].sense == Sense::LessEqual);

    // one-dimensional toy: min x^2 s.t. x^2 <= 1
    QcqpInstance toy;
    toy.dim = 1;
    toy.ineq_count = 1;
    toy.eq_count = 0;
    toy.q.push_back({Matrix::Identity(1, 1), Vector::Zero(1), 0.0});
    toy.q.push_back({Matrix::Identity(1, 1), Vector::Zero(1), -1.0});
    const BlockSdp t = build_shor(toy);
    CHECK(t.block_dims[0] == 2);
    CHECK(t.constraints.size() == 2);
    CHECK(t.constraints[1].sense == Sense::LessEqual);
}

TEST_CASE("certify_assumption1 on the fixtures") {
    SUBCASE("circle: gamma = 0 already works") {
        const Assumption1Certificate c = certify_assumption1(fixtures::circle_sharp(), {}, fast_oracle());
        REQUIRE(c.holds == Tri::yes);
        CHECK(c.margin > 0.0);
        CHECK(c.margin <= 1.0 + 1e-6);  // traceless constraint forms cap the margin at 1
        REQUIRE(c.feasible_point.has_value());
        CHECK(feasibility_residual(fixtures::circle_sharp(), *c.feasible_point) <= 1e-6);
    }
    SUBCASE("separating example holds") {
        const Assumption1Certificate c = certify_assumption1(fixtures::separating_by(), {}, fast_oracle());
        REQUIRE(c.holds == Tri::yes);
        const AggregatedQuadratic agg = aggregate(fixtures::separating_by(), c.gamma_star);
        CHECK(min_eigenvalue(agg.A) > 0.0);
    }
    SUBCASE("negative form with negative objective form cannot hold") {
        QcqpInstance bad;
        bad.dim = 1;
        bad.ineq_count = 1;
        bad.eq_count = 0;
        bad.q.push_back({-Matrix::Identity(1, 1), Vector::Zero(1), 0.0});
        bad.q.push_back({-Matrix::Identity(1, 1), Vector::Zero(1), 0.0});
        const Assumption1Certificate c = certify_assumption1(bad, {}, fast_oracle());
        CHECK(c.holds == Tri::no);
    }
}

TEST_CASE("solve_shor frozen relaxation values") {
    SUBCASE("circle: one half") {
        const ShorSolution s = solve_shor(fixtures::circle_sharp());
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(s.opt_sdp == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("polyhedral-sharp n=2 k=1: minus one") {
        const ShorSolution s = solve_shor(fixtures::polyhedral_sharp(2, 1));
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(s.opt_sdp == doctest::Approx(-1.0).epsilon(1e-6));
    }
    SUBCASE("tightness-without-hull example: zero at the origin") {
        const ShorSolution s = solve_shor(fixtures::optimality());
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(s.opt_sdp == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(s.x.norm() <= 1e-4);
    }
}

TEST_CASE("relaxation sandwich and dual consistency on every fixture") {
    const std::vector<QcqpInstance> insts = {
        fixtures::b_zero(), fixtures::circle_sharp(), fixtures::optimality(),
        fixtures::separating_by(), fixtures::k2_example(), fixtures::gtrs(),
        fixtures::convex_qcqp(), fixtures::alpha_identity()};
    for (const QcqpInstance& inst : insts) {
        CAPTURE(inst.name);
        const ShorSolution s = solve_shor(inst);
        REQUIRE(s.status == SolveStatus::optimal);

        const Assumption1Certificate cert = certify_assumption1(inst, {}, fast_oracle());
        OracleOptions oo = fast_oracle();
        if (cert.holds == Tri::yes) oo.gamma_star = cert.gamma_star;
        const OracleEstimate est = estimate_opt(inst, oo);
        REQUIRE(est.found);
        const double scale = 1.0 + std::abs(est.best_value);
        CHECK(s.opt_sdp <= est.best_value + 1e-6 * scale);

        // dual vector lands (approximately) in the multiplier set and
        // reproduces the optimal value through the aggregated quadratic
        for (int i = 1; i <= inst.m(); ++i)
            if (inst.is_inequality(i)) CHECK(s.gamma_hat(i - 1) >= -1e-7);
        const AggregatedQuadratic agg = aggregate(inst, s.gamma_hat);
        CHECK(min_eigenvalue(agg.A) >= -1e-6 * std::max(1.0, agg.A.norm()));
        CHECK(evaluate_aggregate(agg, s.x) ==
              doctest::Approx(s.opt_sdp).epsilon(1e-5));
    }
}

TEST_CASE("relaxation value is invariant under invertible affine maps") {
    Rng rng(77);
    const QcqpInstance base = fixtures::b_zero();
    const double ref = solve_shor(base).opt_sdp;
    for (int trial = 0; trial < 3; ++trial) {
        Matrix S = rng.normal_matrix(2, 2);
        while (std::abs(S.determinant()) < 0.3) S = rng.normal_matrix(2, 2);
        const Vector u = rng.normal_vector(2);
        QcqpInstance mapped = base;
        for (Quadratic& q : mapped.q) {
            const Matrix A = q.A;
            const Vector b = q.b;
            const double c = q.c;
            q.A = S.transpose() * A * S;
            q.b = S.transpose() * (A * u + b);
            q.c = u.dot(A * u) + 2.0 * b.dot(u) + c;
        }
        const ShorSolution s = solve_shor(mapped);
        REQUIRE(s.status == SolveStatus::optimal);
        CHECK(s.opt_sdp == doctest::Approx(ref).epsilon(1e-6));
    }
}

TEST_CASE("membership fallback with pinned first column") {
    const QcqpInstance circ = fixtures::circle_sharp();
    // at x = 0 the pinned problem forces X = sI with value 1 + 2s, so the
    // epigraph threshold sits at 2t = 1
    CHECK(membership_D_SDP_fallback(circ, {Vector::Zero(2), 0.5 + 1e-4}));
    CHECK_FALSE(membership_D_SDP_fallback(circ, {Vector::Zero(2), 0.49}));
}

TEST_CASE("diagonal detection") {
    CHECK(is_diagonal_instance(fixtures::b_zero()));
    CHECK(is_diagonal_instance(fixtures::k2_example()));
    CHECK_FALSE(is_diagonal_instance(fixtures::circle_sharp()));
}

TEST_CASE("lifted SOCP equals the SDP relaxation on diagonal fixtures") {
    for (const QcqpInstance& inst : {fixtures::b_zero(), fixtures::k2_example()}) {
        CAPTURE(inst.name);
        const ShorSolution sdp = solve_shor(inst);
        const SocpSolution socp = solve_socp(inst);
        REQUIRE(sdp.status == SolveStatus::optimal);
        REQUIRE(socp.status == SolveStatus::optimal);
        const double scale = 1.0 + std::abs(sdp.opt_sdp);
        CHECK(std::abs(socp.opt_socp - sdp.opt_sdp) <= 1e-6 * scale);
    }
}

TEST_CASE("SOCP epigraph threshold matches the explicit three-quadratic description") {
    // for the b-zero fixture the projected epigraph is
    //   max(q_0(x), 2x1^2+10x1-5, 2x2^2+10x1-50) <= 2t
    const QcqpInstance inst = fixtures::b_zero();
    Rng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        const Vector x = 4.0 * rng.normal_vector(2);
        const auto thr = socp_epigraph_threshold(inst, x);
        REQUIRE(thr.has_value());
        const double q0 = evaluate(inst, 0, x);
        const double g1 = 2.0 * x(0) * x(0) + 10.0 * x(0) - 5.0;
        const double g2 = 2.0 * x(1) * x(1) + 10.0 * x(0) - 50.0;
        const double expect = 0.5 * std::max({q0, g1, g2});
        CHECK(*thr == doctest::Approx(expect).epsilon(1e-6));
    }
}
