#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcex/fixtures.hpp"
#include "qcex/model.hpp"

using namespace qcex;

TEST_CASE("evaluate on the worked fixtures") {
    const QcqpInstance bz = fixtures::b_zero();
    Vector x0 = Vector::Zero(2);
    CHECK(evaluate(bz, 0, x0) == doctest::Approx(0.0));

    Vector xm5(2);
    xm5 << -5, 0;
    CHECK(evaluate(bz, 0, xm5) == doctest::Approx(-25.0));  // 25 + 0 - 50

    const QcqpInstance circ = fixtures::circle_sharp();
    Vector ones(2);
    ones << 1, 1;
    CHECK(evaluate(circ, 1, ones) == doctest::Approx(2.0));  // 1 - 1 + 2
}

TEST_CASE("evaluate rejects bad indices and dimensions") {
    const QcqpInstance bz = fixtures::b_zero();
    CHECK_THROWS_AS(evaluate(bz, 3, Vector::Zero(2)), DimensionError);
    CHECK_THROWS_AS(evaluate(bz, 0, Vector::Zero(3)), DimensionError);
}

TEST_CASE("aggregate at gamma = 0 returns the objective data") {
    const QcqpInstance bz = fixtures::b_zero();
    const AggregatedQuadratic agg = aggregate(bz, Vector::Zero(2));
    CHECK((agg.A - bz.q[0].A).norm() == doctest::Approx(0.0));
    CHECK((agg.b - bz.q[0].b).norm() == doctest::Approx(0.0));
    CHECK(agg.c == doctest::Approx(bz.q[0].c));
}

TEST_CASE("aggregate on circle instance at (1/2,1/2) is diag(2,0)") {
    const QcqpInstance circ = fixtures::circle_sharp();
    Vector g(2);
    g << 0.5, 0.5;
    const AggregatedQuadratic agg = aggregate(circ, g);
    Matrix expect(2, 2);
    expect << 2, 0, 0, 0;
    CHECK((agg.A - expect).norm() <= 1e-14);
}

TEST_CASE("aggregate on separating example at (1,0) vanishes") {
    const QcqpInstance sep = fixtures::separating_by();
    Vector g(2);
    g << 1, 0;
    CHECK(aggregate(sep, g).A.norm() <= 1e-14);
}

TEST_CASE("aggregate identity q(gamma,x) = q_0(x) + sum gamma_i q_i(x)") {
    Rng rng(3);
    const QcqpInstance inst = fixtures::qmp(2, 2, 3, 17);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector x = rng.normal_vector(inst.dim);
        const Vector g = rng.normal_vector(inst.m());
        const AggregatedQuadratic agg = aggregate(inst, g);
        double direct = evaluate(inst, 0, x);
        for (int i = 1; i <= inst.m(); ++i) direct += g(i - 1) * evaluate(inst, i, x);
        const double scale = std::max(1.0, std::abs(direct));
        CHECK(std::abs(evaluate_aggregate(agg, x) - direct) <= 1e-12 * scale);
    }
}

TEST_CASE("aggregate is affine in gamma") {
    Rng rng(9);
    const QcqpInstance inst = fixtures::b_zero();
    for (int trial = 0; trial < 20; ++trial) {
        const Vector g1 = rng.normal_vector(2);
        const Vector g2 = rng.normal_vector(2);
        const AggregatedQuadratic a1 = aggregate(inst, g1);
        const AggregatedQuadratic a2 = aggregate(inst, g2);
        const AggregatedQuadratic a0 = aggregate(inst, Vector::Zero(2));
        const AggregatedQuadratic a12 = aggregate(inst, g1 + g2);
        CHECK((a1.A + a2.A - a0.A - a12.A).norm() <= 1e-12);
        CHECK((a1.b + a2.b - a0.b - a12.b).norm() <= 1e-12);
        CHECK(std::abs(a1.c + a2.c - a0.c - a12.c) <= 1e-12);
    }
}

TEST_CASE("feasible_in_D on the paper points") {
    const QcqpInstance circ = fixtures::circle_sharp();
    CHECK(feasible_in_D(circ, {Vector::Zero(2), 0.5}, 1e-9));

    const QcqpInstance opt = fixtures::optimality();
    Vector e1(2);
    e1 << 1, 0;
    CHECK_FALSE(feasible_in_D(opt, {e1, 0.5}, 1e-9));  // q_1 = 1 > 0
    CHECK_FALSE(feasible_in_D(opt, {e1, 1.0}, 1e-9));

    const QcqpInstance bz = fixtures::b_zero();
    CHECK(feasible_in_D(bz, {Vector::Zero(2), 0.0}, 1e-9));
}

TEST_CASE("feasible_in_D is monotone in t") {
    Rng rng(13);
    const QcqpInstance bz = fixtures::b_zero();
    for (int trial = 0; trial < 50; ++trial) {
        const Vector x = 3.0 * rng.normal_vector(2);
        const double t = 5.0 * rng.normal();
        if (feasible_in_D(bz, {x, t}, 1e-9))
            CHECK(feasible_in_D(bz, {x, t + std::abs(rng.normal())}, 1e-9));
    }
}

TEST_CASE("validate flags malformed instances") {
    QcqpInstance good = fixtures::b_zero();
    CHECK(validate(good).empty());

    QcqpInstance asym = fixtures::b_zero();
    asym.q[1].A(0, 1) = 0.5;  // break symmetry
    const auto diags = validate(asym);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].find("not symmetric") != std::string::npos);

    QcqpInstance none = fixtures::b_zero();
    none.q.resize(1);
    none.ineq_count = 0;
    none.eq_count = 0;
    const auto d2 = validate(none);
    CHECK(!d2.empty());

    QcqpInstance nan = fixtures::b_zero();
    nan.q[0].c = std::numeric_limits<double>::quiet_NaN();
    CHECK(!validate(nan).empty());
}

TEST_CASE("symmetrize repairs and warns") {
    QcqpInstance asym = fixtures::b_zero();
    asym.q[1].A(0, 1) = 0.5;
    const auto warnings = symmetrize(asym);
    REQUIRE(warnings.size() == 1);
    CHECK(validate(asym).empty());
    CHECK(asym.q[1].A(0, 1) == doctest::Approx(0.25));
    CHECK(asym.q[1].A(1, 0) == doctest::Approx(0.25));
}
