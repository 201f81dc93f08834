#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "rbp/oracle.hpp"

using namespace rbp;
using namespace rbp::testing;

TEST_CASE("oracle feasibility on tiny systems") {
    // x <= 1, -x <= -1/3: feasible band.
    CHECK(oracle_feasible({{make_rat(1)}, {make_rat(-1)}}, {make_rat(1), make_rat(-1, 3)}));
    // x <= -1 with x >= 0: empty.
    CHECK(!oracle_feasible({{make_rat(1)}}, {make_rat(-1)}));
    CHECK(oracle_feasible({}, {}));
}

TEST_CASE("hull membership for generator descriptions") {
    OracleSetDescription desc;
    desc.generators = {{make_rat(2), make_rat(0)}, {make_rat(0), make_rat(2)}};
    CHECK(oracle_membership(desc, {make_rat(1), make_rat(1)}, 8));
    CHECK(!oracle_membership(desc, {make_rat(2), make_rat(1)}, 8));
    CHECK(oracle_membership(desc, {make_rat(0), make_rat(0)}, 8));
    CHECK(oracle_membership(desc, {make_rat(1, 3), make_rat(5, 3)}, 8));
    CHECK(!oracle_membership(desc, {make_rat(0), make_rat(17, 8)}, 8));
}

TEST_CASE("hull membership for constraint descriptions") {
    HPolyhedron simplex2 = HPolyhedron::orthant(2);
    simplex2.rows.push_back({{make_rat(1), make_rat(1)}, make_rat(2)});
    OracleSetDescription desc;
    desc.constraints = simplex2;
    CHECK(oracle_membership(desc, {make_rat(1), make_rat(1)}, 8));
    CHECK(oracle_membership(desc, {make_rat(1, 8), make_rat(0)}, 8));
    CHECK(!oracle_membership(desc, {make_rat(2), make_rat(1, 8)}, 8));
}

TEST_CASE("oracle agrees with the main path on probe grids") {
    std::mt19937 rng(61);
    auto priors = all_diracs(3);
    for (int t = 0; t < 4; ++t) {
        RobustSet g = random_generator_set(rng, priors);
        RobustSet hull = bipolar_ca(g);
        OracleSetDescription desc;
        desc.generators = g.points;
        for (int i = 0; i <= 4; ++i) {
            for (int j = 0; j <= 4; ++j) {
                for (int k = 0; k <= 4; ++k) {
                    Vec x{make_rat(i), make_rat(j), make_rat(k)};
                    CHECK(oracle_membership(desc, x, 8) == set_member(hull, x));
                }
            }
        }
    }
}

TEST_CASE("oracle input validation") {
    OracleSetDescription both;
    both.generators = {{make_rat(1)}};
    both.constraints = HPolyhedron::orthant(1);
    CHECK_THROWS_AS(oracle_membership(both, {make_rat(0)}, 8), input_error);

    OracleSetDescription gen4;
    gen4.generators = {{make_rat(1), make_rat(1), make_rat(1), make_rat(1)}};
    CHECK_THROWS_AS(
        oracle_membership(gen4, {make_rat(0), make_rat(0), make_rat(0), make_rat(0)}, 8),
        input_error);
}
