#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcex/symmetry.hpp"

using namespace qcex;

TEST_CASE("structural detection on the worked examples") {
    CHECK(detect_k(fixtures::k2_example()).k == 2);
    CHECK(detect_k(fixtures::circle_sharp()).k == 1);
    CHECK(detect_k(fixtures::alpha_identity()).k == 3);  // every form a multiple of I_3
}

TEST_CASE("reported k divides N and base forms reconstruct the data") {
    const std::vector<QcqpInstance> insts = {
        fixtures::k2_example(), fixtures::b_zero(), fixtures::qmp(2, 3, 2, 5),
        fixtures::alpha_identity()};
    for (const QcqpInstance& inst : insts) {
        CAPTURE(inst.name);
        const MultiplicityReport rep = detect_k(inst);
        CHECK(inst.dim % rep.k == 0);
        REQUIRE(rep.base_forms.size() == inst.q.size());
        const int n = inst.dim / rep.k;
        for (std::size_t i = 0; i < inst.q.size(); ++i) {
            Matrix lifted = Matrix::Zero(inst.dim, inst.dim);
            for (int l = 0; l < rep.k; ++l)
                lifted.block(l * n, l * n, n, n) = rep.base_forms[i];
            CHECK((lifted - inst.q[i].A).norm() <=
                  1e-10 * std::max(1.0, inst.q[i].A.norm()));
        }
    }
}

TEST_CASE("vectorized matrix-program generator round-trips its parameter") {
    for (int k = 1; k <= 4; ++k) {
        const QcqpInstance inst = fixtures::qmp(2, k, 2, 123 + k);
        CHECK(detect_k(inst).k == k);
    }
}

TEST_CASE("heuristic detection agrees on structured and unstructured inputs") {
    SUBCASE("worked 4-dimensional example") {
        const MultiplicityReport rep = detect_k_heuristic(fixtures::k2_example());
        CHECK(rep.k == 2);
        CHECK(rep.method == MultiplicityMethod::heuristic);
        CHECK_FALSE(rep.base_forms.empty());
    }
    SUBCASE("random dense forms have simple spectra") {
        Rng rng(91);
        QcqpInstance inst;
        inst.dim = 4;
        inst.ineq_count = 2;
        inst.eq_count = 0;
        inst.q.push_back({rng.symmetric_matrix(4), rng.normal_vector(4), 0.0});
        inst.q.push_back({rng.symmetric_matrix(4), rng.normal_vector(4), -1.0});
        inst.q.push_back({rng.symmetric_matrix(4), rng.normal_vector(4), -1.0});
        CHECK(detect_k_heuristic(inst).k == 1);
    }
    SUBCASE("identity objective with one structured constraint") {
        QcqpInstance inst;
        inst.dim = 4;
        inst.ineq_count = 1;
        inst.eq_count = 0;
        Vector d(4);
        d << 1, 2, 1, 2;
        inst.q.push_back({Matrix::Identity(4, 4), Vector::Zero(4), 0.0});
        inst.q.push_back({Matrix(d.asDiagonal()), Vector::Zero(4), -1.0});
        CHECK(detect_k_heuristic(inst).k == 2);
        CHECK(detect_k(inst).k == 2);
    }
}
