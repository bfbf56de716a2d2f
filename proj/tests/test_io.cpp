#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcex/io.hpp"

using namespace qcex;

TEST_CASE("serialize-parse round trip is exact on every fixture") {
    const std::vector<QcqpInstance> insts = {
        fixtures::b_zero(), fixtures::circle_sharp(), fixtures::optimality(),
        fixtures::qmp(2, 3, 3, 99)};
    for (const QcqpInstance& inst : insts) {
        CAPTURE(inst.name);
        const nlohmann::json j = instance_to_json(inst);
        const InstanceFile file = parse_instance(j);
        CHECK(file.warnings.empty());
        REQUIRE(file.instance.q.size() == inst.q.size());
        CHECK(file.instance.ineq_count == inst.ineq_count);
        CHECK(file.instance.eq_count == inst.eq_count);
        for (std::size_t i = 0; i < inst.q.size(); ++i) {
            CHECK((file.instance.q[i].A - inst.q[i].A).cwiseAbs().maxCoeff() == 0.0);
            CHECK((file.instance.q[i].b - inst.q[i].b).cwiseAbs().maxCoeff() == 0.0);
            CHECK(file.instance.q[i].c == inst.q[i].c);
        }
        // canonical serialization is a fixed point
        CHECK(instance_to_json(file.instance).dump() == j.dump());
    }
}

TEST_CASE("constraints may arrive in any order; inequalities are moved first") {
    nlohmann::json j;
    j["N"] = 1;
    j["objective"] = {{"A", {{1.0}}}, {"b", {0.0}}, {"c", 0.0}};
    j["constraints"] = nlohmann::json::array();
    j["constraints"].push_back(
        {{"A", {{2.0}}}, {"b", {0.0}}, {"c", 0.0}, {"sense", "=="}});
    j["constraints"].push_back(
        {{"A", {{3.0}}}, {"b", {0.0}}, {"c", -1.0}, {"sense", "<="}});
    const InstanceFile file = parse_instance(j);
    CHECK(file.instance.ineq_count == 1);
    CHECK(file.instance.eq_count == 1);
    CHECK(file.instance.q[1].A(0, 0) == 3.0);  // the inequality comes first
    CHECK(file.instance.q[2].A(0, 0) == 2.0);
}

TEST_CASE("asymmetric matrices are symmetrized with a warning") {
    nlohmann::json j;
    j["N"] = 2;
    j["objective"] = {{"A", {{1.0, 1.0}, {0.0, 1.0}}}, {"b", {0.0, 0.0}}, {"c", 0.0}};
    j["constraints"] = nlohmann::json::array();
    j["constraints"].push_back({{"A", {{1.0, 0.0}, {0.0, 1.0}}},
                                {"b", {0.0, 0.0}},
                                {"c", -1.0},
                                {"sense", "<="}});
    const InstanceFile file = parse_instance(j);
    REQUIRE(file.warnings.size() == 1);
    CHECK(file.instance.q[0].A(0, 1) == doctest::Approx(0.5));
    CHECK(file.instance.q[0].A(1, 0) == doctest::Approx(0.5));
}

TEST_CASE("malformed documents are rejected") {
    nlohmann::json good;
    good["N"] = 1;
    good["objective"] = {{"A", {{1.0}}}, {"b", {0.0}}, {"c", 0.0}};
    good["constraints"] = nlohmann::json::array();
    good["constraints"].push_back({{"A", {{1.0}}}, {"b", {0.0}}, {"c", -1.0}, {"sense", "<="}});
    CHECK_NOTHROW(parse_instance(good));

    nlohmann::json no_n = good;
    no_n.erase("N");
    CHECK_THROWS_AS(parse_instance(no_n), ParseError);

    nlohmann::json bad_row = good;
    bad_row["objective"]["A"] = {{1.0, 2.0}};
    CHECK_THROWS_AS(parse_instance(bad_row), ParseError);

    nlohmann::json bad_sense = good;
    bad_sense["constraints"][0]["sense"] = ">=";
    CHECK_THROWS_AS(parse_instance(bad_sense), ParseError);

    nlohmann::json none = good;
    none["constraints"] = nlohmann::json::array();
    CHECK_THROWS_AS(parse_instance(none), ParseError);

    nlohmann::json nan_entry = good;
    nan_entry["objective"]["c"] = nullptr;
    CHECK_THROWS_AS(parse_instance(nan_entry), nlohmann::json::exception);
}

TEST_CASE("asserted multiplier rows parse alongside the instance") {
    nlohmann::json j = instance_to_json(fixtures::gamma_ineq_triangle());
    j["gamma_assert"] = {
        {"H", nlohmann::json::array({{{"coeffs", {-1.0, -1.0}}, {"rhs", -1.0}},
                                     {{"coeffs", {1.0, 0.0}}, {"rhs", 0.0}},
                                     {{"coeffs", {0.0, 1.0}}, {"rhs", 0.0}}})}};
    const InstanceFile file = parse_instance(j);
    REQUIRE(file.gamma_assert.has_value());
    REQUIRE(file.gamma_assert->size() == 3);
    CHECK((*file.gamma_assert)[0].rhs == -1.0);
    CHECK((*file.gamma_assert)[0].coeffs(1) == -1.0);
}
