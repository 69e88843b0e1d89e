#include <catch2/catch_amalgamated.hpp>

#include "linermoo/oracle.hpp"
#include "toys.hpp"

using namespace linermoo;

TEST_CASE("zero-demand oracle front is the pure speed trade-off",
          "[oracle]") {
    Instance inst = toys::single_route(0);
    Problem prob = Problem::build(inst);
    OracleParams params;
    params.speed_step = 1.0;
    OracleResult res = oracle_front(prob, params);
    REQUIRE(res.front.size() >= 5);
    for (std::size_t k = 1; k < res.front.size(); ++k) {
        CHECK(res.front[k].solution.f1_usd >
              res.front[k - 1].solution.f1_usd);
        CHECK(res.front[k].solution.f2_hours <
              res.front[k - 1].solution.f2_hours);
    }
    // the extremes sit at the speed box corners
    CHECK(res.front.front().solution.speeds_kn[0][0] == 14.0);
    CHECK(res.front.back().solution.speeds_kn[0][0] == 24.0);
}

TEST_CASE("oracle keeps the cheaper-path extreme", "[oracle]") {
    // direct service is strictly cheaper than transshipping via B: the
    // cost-minimal front member routes everything onto route 1
    Instance inst = toys::three_port();
    Problem prob = Problem::build(inst);
    OracleParams params;
    params.speed_step = 2.0;
    params.weight_levels = 3;
    OracleResult res = oracle_front(prob, params);
    REQUIRE_FALSE(res.front.empty());
    const Solution& cheapest = res.front.front().solution;
    CHECK(cheapest.flow.leg_flow(1, 0) == 0.0);
    CHECK(cheapest.flow.leg_flow(0, 0) == 100.0);
}

TEST_CASE("oracle front members are feasible and mutually nondominated",
          "[oracle]") {
    Instance inst = toys::hub();
    Problem prob = Problem::build(inst);
    OracleParams params;
    params.speed_step = 2.0;
    params.offset_levels = 7;
    OracleResult res = oracle_front(prob, params);
    REQUIRE_FALSE(res.front.empty());
    for (const Member& m : res.front) CHECK(m.solution.residuals.feasible());
    for (std::size_t a = 0; a < res.front.size(); ++a)
        for (std::size_t b = 0; b < res.front.size(); ++b) {
            if (a == b) continue;
            const bool dominates =
                res.front[a].solution.f1_usd <= res.front[b].solution.f1_usd &&
                res.front[a].solution.f2_hours <=
                    res.front[b].solution.f2_hours;
            CHECK_FALSE(dominates);
        }
}

TEST_CASE("the enumeration guard refuses oversized grids", "[oracle]") {
    Instance inst = generate_instance(24, 6, 5, 7, 20);
    Problem prob = Problem::build(inst);
    CHECK_THROWS_AS(oracle_front(prob, OracleParams{}), OracleGuardError);
}
