#include "doctest.h"
#include "helpers.hpp"
#include "rbp/market.hpp"
#include "rbp/simplex.hpp"

using namespace rbp;
using namespace rbp::testing;

namespace {

// One-period two-state market with terminal prices (up, down).
MarketModel binomial(const Rat& up, const Rat& down) {
    FiniteSpace space({"u", "d"});
    std::vector<std::vector<Event>> filtration{{Event::all(2)},
                                               {Event::singleton(2, 0), Event::singleton(2, 1)}};
    std::vector<std::vector<Vec>> prices{{{make_rat(1), make_rat(1)}, {up, down}}};
    std::vector<ProbabilityMeasure> gens;
    for (int i = 0; i < 2; ++i) {
        Vec w(2, Rat(0));
        w[i] = 1;
        gens.emplace_back(std::move(w));
    }
    return make_market(std::move(space), std::move(filtration), std::move(prices), gens);
}

// Two-period recombining market: moves x2, x1, x1/2 each period on the path
// space of nine atoms; partition at t=1 groups by the first move.
MarketModel trinomial2() {
    std::vector<std::string> labels;
    const char* moves = "umd";
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) labels.push_back(std::string(1, moves[i]) + moves[j]);
    FiniteSpace space(labels);

    auto block = [&](int first) {
        Event e = Event::none(9);
        for (int j = 0; j < 3; ++j) e.members[first * 3 + j] = true;
        return e;
    };
    std::vector<Event> t1{block(0), block(1), block(2)};
    std::vector<Event> t2;
    for (int a = 0; a < 9; ++a) t2.push_back(Event::singleton(9, a));
    std::vector<std::vector<Event>> filtration{{Event::all(9)}, t1, t2};

    Rat factor[3] = {make_rat(2), make_rat(1), make_rat(1, 2)};
    Vec s0(9, Rat(1)), s1(9), s2(9);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            s1[i * 3 + j] = factor[i];
            s2[i * 3 + j] = factor[i] * factor[j];
        }
    }
    std::vector<std::vector<Vec>> prices{{s0, s1, s2}};
    std::vector<ProbabilityMeasure> gens;
    for (int a = 0; a < 9; ++a) {
        Vec w(9, Rat(0));
        w[a] = 1;
        gens.emplace_back(std::move(w));
    }
    return make_market(std::move(space), std::move(filtration), std::move(prices), gens);
}

}  // namespace

TEST_CASE("binomial superhedge set") {
    auto market = binomial(make_rat(2), make_rat(1, 2));
    RobustSet c = superhedge_set(market);
    // Eliminating the strategy yields X_u + 2 X_d <= 3.
    Measure mu{{make_rat(1), make_rat(2)}};
    RobustSet expected = from_constraints(market.priors, {{mu, make_rat(3)}});
    CHECK(robust_set_equal(c, expected));
    // Always contains the claims below 1 (zero strategy).
    CHECK(contains(*c.poly, *unit_box(market.priors).poly).contained);
    CHECK(is_solid(c).solid);
}

TEST_CASE("flat prices superhedge exactly the unit box") {
    auto market = binomial(make_rat(1), make_rat(1));
    RobustSet c = superhedge_set(market);
    CHECK(robust_set_equal(c, unit_box(market.priors)));
}

TEST_CASE("arbitrage markets superhedge everything") {
    auto market = binomial(make_rat(2), make_rat(3));
    RobustSet c = superhedge_set(market);
    CHECK(robust_set_equal(c, full_orthant(market.priors)));
    CHECK(is_empty(martingale_measures(market)));
}

TEST_CASE("binomial martingale polytope is a single point") {
    auto market = binomial(make_rat(2), make_rat(1, 2));
    HPolyhedron mm = martingale_measures(market);
    auto verts = vertex_enumerate(mm);
    REQUIRE(verts.size() == 1);
    CHECK(verts[0] == Vec{make_rat(1, 3), make_rat(2, 3)});
}

TEST_CASE("flat prices admit every probability as martingale measure") {
    auto market = binomial(make_rat(1), make_rat(1));
    HPolyhedron mm = martingale_measures(market);
    CHECK(member(mm, {make_rat(1, 4), make_rat(3, 4)}));
    CHECK(member(mm, {make_rat(1), make_rat(0)}));
    CHECK(!member(mm, {make_rat(1, 2), make_rat(1, 4)}));
}

TEST_CASE("dual martingale verification across market shapes") {
    for (auto& market : {binomial(make_rat(2), make_rat(1, 2)), binomial(make_rat(1), make_rat(1)),
                         binomial(make_rat(2), make_rat(3))}) {
        auto rep = verify_dual_martingale(market);
        CHECK(rep.match);
        CHECK(!rep.counterexample.has_value());
    }
}

TEST_CASE("no-arbitrage dichotomy on one-period markets") {
    for (int num = 1; num <= 6; ++num) {
        for (int den = 1; den <= 3; ++den) {
            auto market = binomial(make_rat(num, den), make_rat(1, 2));
            bool full = robust_set_equal(superhedge_set(market), full_orthant(market.priors));
            bool no_mm = is_empty(martingale_measures(market));
            CHECK(full == no_mm);
        }
    }
}

TEST_CASE("two-period recombining market") {
    auto market = trinomial2();
    RobustSet c = superhedge_set(market);
    CHECK(is_solid(c).solid);
    CHECK(contains(*c.poly, *unit_box(market.priors).poly).contained);
    auto rep = verify_dual_martingale(market);
    CHECK(rep.match);

    // Spot-check a martingale measure: uniform over {uu, ud} fails, while
    // the product of one-step measures with q_u = 1/3, q_d = 2/3 works.
    Vec prod(9, Rat(0));
    Rat qm[3] = {make_rat(1, 3), make_rat(0), make_rat(2, 3)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) prod[i * 3 + j] = qm[i] * qm[j];
    CHECK(member(rep.martingale_polytope, prod));
    Vec bad(9, Rat(0));
    bad[0] = make_rat(1, 2);
    bad[1] = make_rat(1, 2);
    CHECK(!member(rep.martingale_polytope, bad));
}

TEST_CASE("market validation rejects malformed inputs") {
    FiniteSpace space({"u", "d"});
    std::vector<ProbabilityMeasure> gens;
    for (int i = 0; i < 2; ++i) {
        Vec w(2, Rat(0));
        w[i] = 1;
        gens.emplace_back(std::move(w));
    }
    // Price not measurable at its date.
    std::vector<std::vector<Event>> filtration{{Event::all(2)},
                                               {Event::singleton(2, 0), Event::singleton(2, 1)}};
    std::vector<std::vector<Vec>> bad_prices{{{make_rat(1), make_rat(2)}, {make_rat(2), make_rat(1)}}};
    CHECK_THROWS_AS(make_market(space, filtration, bad_prices, gens), input_error);
    // Non-refining filtration.
    std::vector<std::vector<Event>> bad_filt{
        {Event::singleton(2, 0), Event::singleton(2, 1)}, {Event::all(2)}};
    std::vector<std::vector<Vec>> prices{{{make_rat(1), make_rat(1)}, {make_rat(2), make_rat(1, 2)}}};
    CHECK_THROWS_AS(make_market(space, bad_filt, prices, gens), input_error);
}

TEST_CASE("acceptance sets from per-model regions") {
    auto priors = dirac_pair_abc();
    auto diracs = dirac_alternative(priors);

    // Caps Z <= 1 on each Dirac support: the unit box.
    AcceptanceSpec spec;
    for (int i = 0; i < 2; ++i) {
        HPolyhedron region;
        region.dim = 1;
        region.nonneg = true;
        region.rows.push_back({{make_rat(1)}, make_rat(1)});
        spec.entries.emplace_back(diracs[i], region);
    }
    RobustSet acc = acceptance_set(spec, priors);
    CHECK(robust_set_equal(acc, unit_box(priors)));

    // Expectation caps under two full-support models.
    Vec w1{make_rat(1, 2), make_rat(1, 2), make_rat(0)};
    Vec w2{make_rat(1, 4), make_rat(3, 4), make_rat(0)};
    AcceptanceSpec ecaps;
    for (const Vec& w : {w1, w2}) {
        HPolyhedron region;
        region.dim = 2;
        region.nonneg = true;
        region.rows.push_back({{w[0], w[1]}, make_rat(1)});
        ecaps.entries.emplace_back(ProbabilityMeasure(w), region);
    }
    RobustSet acc2 = acceptance_set(ecaps, priors);
    Measure m1{w1}, m2{w2};
    RobustSet expected = from_constraints(priors, {{m1, make_rat(1)}, {m2, make_rat(1)}});
    CHECK(robust_set_equal(acc2, expected));

    AcceptanceSpec empty;
    CHECK_THROWS_AS(acceptance_set(empty, priors), input_error);
}
