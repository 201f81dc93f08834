#include "doctest.h"
#include "helpers.hpp"
#include "rbp/transport.hpp"

using namespace rbp;
using namespace rbp::testing;

namespace {

// Both marginal sets are {X <= 1}: total-mass-at-most-one marginals.
MarginalSystem unit_mass_system(const PriorSet& p1, const PriorSet& p2) {
    return make_marginal_system(unit_box(p1), unit_box(p2));
}

Vec constant_goal(const ProductModel& model, const Rat& value) {
    return Vec(model.product.qdim(), value);
}

}  // namespace

TEST_CASE("product model pairs non-polar atoms") {
    auto p1 = dirac_pair_abc();  // polar atom c
    auto p2 = all_diracs(2);
    ProductModel model = make_product_model(p1, p2);
    CHECK(model.product.qdim() == 4);  // {a,b} x {w0,w1}
    CHECK(model.product.space.n() == 6);
    for (auto [i, j] : model.factor_positions) {
        CHECK(i >= 0);
        CHECK(j >= 0);
    }
}

TEST_CASE("unit-mass marginals: primal picks the largest atom value") {
    auto p1 = all_diracs(2);
    auto p2 = all_diracs(2);
    ProductModel model = make_product_model(p1, p2);
    MarginalSystem sys = unit_mass_system(p1, p2);

    Vec goal{make_rat(1, 2), make_rat(1), make_rat(3, 4), make_rat(1, 4)};
    auto primal = relaxed_primal(goal, model, sys);
    CHECK(primal.value == make_rat(1));

    auto zero = relaxed_primal(zeros(4), model, sys);
    CHECK(zero.value == make_rat(0));
    CHECK(is_zero_vec(zero.mu));
}

TEST_CASE("diagonal goal on a 2x2 grid") {
    auto p1 = all_diracs(2);
    auto p2 = all_diracs(2);
    ProductModel model = make_product_model(p1, p2);
    MarginalSystem sys = unit_mass_system(p1, p2);
    // Identity pattern: 1 on (0,0) and (1,1).
    Vec goal{make_rat(1), make_rat(0), make_rat(0), make_rat(1)};
    auto primal = relaxed_primal(goal, model, sys);
    CHECK(primal.value == make_rat(1));
    auto dual = dual_min(goal, model, sys);
    CHECK(dual.value == make_rat(1));
}

TEST_CASE("constant goal duality attains at half-half") {
    auto p1 = all_diracs(2);
    auto p2 = all_diracs(3);
    ProductModel model = make_product_model(p1, p2);
    MarginalSystem sys = unit_mass_system(p1, p2);
    Vec goal = constant_goal(model, make_rat(1));
    auto dual = dual_min(goal, model, sys);
    CHECK(dual.value == make_rat(1));
    // The attaining pair covers the constant goal.
    for (int pos = 0; pos < model.product.qdim(); ++pos) {
        auto [i, j] = model.factor_positions[pos];
        CHECK(dual.x1[i] + dual.x2[j] >= goal[pos]);
    }
    auto zero = dual_min(zeros(model.product.qdim()), model, sys);
    CHECK(zero.value == make_rat(0));
}

TEST_CASE("no-gap report on the unit-mass instance") {
    auto p1 = all_diracs(2);
    auto p2 = all_diracs(2);
    ProductModel model = make_product_model(p1, p2);
    MarginalSystem sys = unit_mass_system(p1, p2);
    auto rep = check_no_gap(constant_goal(model, make_rat(1)), model, sys);
    CHECK(rep.gap_zero);
    CHECK(rep.primal_value == make_rat(1));
    CHECK(rep.c_equals_d);
    CHECK(rep.polar_identity);
    CHECK(!rep.degenerate);
}

TEST_CASE("cone marginal instance: mass restricted to one atom") {
    // First factor: claims vanishing on the second atom; the polar is the
    // unbounded cone of measures concentrated there. Second factor: unit box.
    auto p1 = all_diracs(2);
    auto p2 = all_diracs(2);
    Measure kill{{make_rat(0), make_rat(1)}};
    RobustSet c1 = from_constraints(p1, {{kill, make_rat(0)}});
    RobustSet c2 = unit_box(p2);
    ProductModel model = make_product_model(p1, p2);
    MarginalSystem sys = make_marginal_system(c1, c2);

    CHECK(member(sys.m1, {make_rat(0), make_rat(7)}));
    CHECK(!member(sys.m1, {make_rat(1, 8), make_rat(0)}));

    Vec goal = constant_goal(model, make_rat(1));
    auto rep = check_no_gap(goal, model, sys);
    CHECK(rep.gap_zero);
    CHECK(rep.c_equals_d);
    CHECK(rep.polar_identity);
    CHECK(rep.primal_value == make_rat(1));
}

TEST_CASE("degenerate system is reported") {
    auto p1 = all_diracs(2);
    auto p2 = all_diracs(2);
    ProductModel model = make_product_model(p1, p2);
    MarginalSystem sys = unit_mass_system(p1, p2);
    auto rep = check_no_gap(zeros(model.product.qdim()), model, sys);
    CHECK(rep.degenerate);
    CHECK(rep.gap_zero);
}

TEST_CASE("weak duality and monotonicity in the marginal system") {
    auto p1 = all_diracs(2);
    auto p2 = all_diracs(2);
    ProductModel model = make_product_model(p1, p2);
    MarginalSystem small = unit_mass_system(p1, p2);
    MarginalSystem big =
        make_marginal_system(bounded_by(p1, QsClass{{make_rat(2), make_rat(2)}}), unit_box(p2));
    // Shrinking C1 enlarges M1 = polar(C1), so values weakly increase.
    Vec goal{make_rat(1), make_rat(1, 2), make_rat(1, 4), make_rat(1)};
    auto v_small = relaxed_primal(goal, model, small);
    auto v_big = relaxed_primal(goal, model, big);
    CHECK(v_big.value <= v_small.value);  // big C1 means small polar
    auto d_small = dual_min(goal, model, small);
    CHECK(d_small.value >= v_small.value);
}

TEST_CASE("marginal polar identity holds on probe measures") {
    auto p1 = all_diracs(2);
    auto p2 = all_diracs(2);
    ProductModel model = make_product_model(p1, p2);
    auto rep = marginal_polar_identity(model, unit_mass_system(p1, p2));
    CHECK(rep.holds);
    CHECK(rep.probes >= 9);

    Measure kill{{make_rat(0), make_rat(1)}};
    RobustSet c1 = from_constraints(p1, {{kill, make_rat(0)}});
    auto rep2 = marginal_polar_identity(model, make_marginal_system(c1, unit_box(p2)));
    CHECK(rep2.holds);
}
