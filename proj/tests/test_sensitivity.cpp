#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "rbp/sensitivity.hpp"

using namespace rbp;
using namespace rbp::testing;

TEST_CASE("envelope of the diagonal under diracs is the box") {
    auto priors = dirac_pair_abc();
    auto diracs = dirac_alternative(priors);
    RobustSet env = sensitive_envelope(diagonal_set(priors), diracs);
    CHECK(robust_set_equal(env, unit_box(priors)));

    // Cylinders of a box reproduce the box.
    CHECK(robust_set_equal(sensitive_envelope(unit_box(priors), diracs), unit_box(priors)));

    // A full-support model identifies everything.
    RobustSet env2 = sensitive_envelope(diagonal_set(priors), {uniform(priors)});
    CHECK(robust_set_equal(env2, diagonal_set(priors)));
}

TEST_CASE("envelope is a closure operator") {
    std::mt19937 rng(53);
    auto priors = all_diracs(3);
    auto diracs = dirac_alternative(priors);
    for (int t = 0; t < 6; ++t) {
        RobustSet s = random_nonneg_rows_set(rng, priors);
        RobustSet e1 = sensitive_envelope(s, diracs);
        CHECK(contains(*e1.poly, *s.poly).contained);                 // extensive
        CHECK(robust_set_equal(sensitive_envelope(e1, diracs), e1));  // idempotent
        RobustSet shrunk = s;
        shrunk.poly->rows.push_back({Vec(3, Rat(1)), make_rat(2)});
        RobustSet e2 = sensitive_envelope(
            make_poly_set(priors, *shrunk.poly, SetOrigin::derived), diracs);
        CHECK(contains(*e1.poly, *e2.poly).contained);                // monotone
    }
}

TEST_CASE("sensitivity verdicts and witnesses") {
    auto priors = dirac_pair_abc();
    auto diracs = dirac_alternative(priors);

    // Bounded sets are sensitive with the priors as reduction set.
    RobustSet below = bounded_by(priors, QsClass{{make_rat(1), make_rat(1)}});
    CHECK(is_sensitive(below, priors.generators).sensitive);
    CHECK(is_sensitive(below, diracs).sensitive);

    auto rep = is_sensitive(diagonal_set(priors), diracs);
    CHECK(!rep.sensitive);
    REQUIRE(rep.witness.has_value());
    CHECK(set_member(rep.envelope, *rep.witness));
    CHECK(!set_member(diagonal_set(priors), *rep.witness));

    // Any set is sensitive for a single full-support model.
    CHECK(is_sensitive(diagonal_set(priors), {uniform(priors)}).sensitive);

    // Reduction-set monotonicity on a chain.
    std::mt19937 rng(59);
    for (int t = 0; t < 4; ++t) {
        RobustSet s = random_nonneg_rows_set(rng, priors);
        if (is_sensitive(s, diracs).sensitive) {
            auto grown = diracs;
            grown.push_back(uniform(priors));
            CHECK(is_sensitive(s, grown).sensitive);
        }
    }
}

TEST_CASE("generator-form sensitivity via pastings") {
    auto priors = dirac_pair_abc();
    auto diracs = dirac_alternative(priors);
    // Indicator family: pastings build the all-ones vector, which escapes.
    RobustSet indicators =
        make_generator_set(priors, {{make_rat(1), make_rat(0)}, {make_rat(0), make_rat(1)}});
    auto rep = is_sensitive(indicators, diracs);
    CHECK(!rep.sensitive);
    REQUIRE(rep.witness.has_value());
    CHECK(!set_member(indicators, *rep.witness));

    // A single point is sensitive: all pastings reproduce it.
    RobustSet one = make_generator_set(priors, {{make_rat(1), make_rat(2)}});
    CHECK(is_sensitive(one, diracs).sensitive);

    // Non-covering reduction sets are not supported for finite sets.
    CHECK_THROWS_AS(sensitive_envelope(indicators, {diracs[0]}), input_error);
}

TEST_CASE("intersection preserves sensitivity with the union reduction set") {
    auto priors = dirac_pair_abc();
    auto diracs = dirac_alternative(priors);
    // Each input is a cylinder over one model, sensitive for that model
    // alone; the intersection is the box, sensitive for the union.
    Measure ea{{make_rat(1), make_rat(0), make_rat(0)}};
    Measure eb{{make_rat(0), make_rat(1), make_rat(0)}};
    RobustSet a = from_constraints(priors, {{ea, make_rat(2)}});
    RobustSet b = from_constraints(priors, {{eb, make_rat(1)}});
    auto rep = intersection_preserves({a, b}, {{diracs[0]}, {diracs[1]}});
    CHECK(rep.all_inputs_sensitive);
    CHECK(rep.intersection_sensitive);
    CHECK(robust_set_equal(rep.result,
                           bounded_by(priors, QsClass{{make_rat(2), make_rat(1)}})));

    auto single = intersection_preserves({a}, {{diracs[0]}});
    CHECK(robust_set_equal(single.result, a));

    // The bounded set below a class intersected with a box keeps the union
    // reduction set.
    RobustSet below = bounded_by(priors, QsClass{{make_rat(1), make_rat(1)}});
    auto mixed = intersection_preserves({below, a}, {diracs, {diracs[0]}});
    CHECK(mixed.all_inputs_sensitive);
    CHECK(mixed.intersection_sensitive);
}

TEST_CASE("coherence of families") {
    auto priors = dirac_pair_abc();
    auto diracs = dirac_alternative(priors);

    CoherentFamily disjoint;
    disjoint.entries.emplace_back(diracs[0], QsClass{{make_rat(1), make_rat(5)}});
    disjoint.entries.emplace_back(diracs[1], QsClass{{make_rat(7), make_rat(2)}});
    CHECK(is_coherent(priors, disjoint).coherent);

    CoherentFamily clash;
    clash.entries.emplace_back(diracs[0], QsClass{{make_rat(1), make_rat(0)}});
    clash.entries.emplace_back(uniform(priors), QsClass{{make_rat(3), make_rat(4)}});
    auto rep = is_coherent(priors, clash);
    CHECK(!rep.coherent);
    auto [i, j, atom] = *rep.conflict;
    CHECK(i == 0);
    CHECK(j == 1);
    CHECK(atom == 0);

    CoherentFamily single;
    single.entries.emplace_back(uniform(priors), QsClass{{make_rat(3), make_rat(4)}});
    CHECK(is_coherent(priors, single).coherent);
}

TEST_CASE("aggregators paste along supports") {
    auto priors = dirac_pair_abc();
    auto diracs = dirac_alternative(priors);

    CoherentFamily fam;
    fam.entries.emplace_back(diracs[0], QsClass{{make_rat(1), make_rat(0)}});
    fam.entries.emplace_back(diracs[1], QsClass{{make_rat(0), make_rat(1)}});
    QsClass agg = build_aggregator(priors, fam, QsClass{zeros(2)});
    CHECK(agg.coords == Vec{make_rat(1), make_rat(1)});

    CoherentFamily full;
    full.entries.emplace_back(uniform(priors), QsClass{{make_rat(3), make_rat(4)}});
    CHECK(build_aggregator(priors, full, QsClass{zeros(2)}).coords ==
          Vec{make_rat(3), make_rat(4)});

    CoherentFamily values;
    values.entries.emplace_back(diracs[0], QsClass{{make_rat(1), make_rat(99)}});
    values.entries.emplace_back(diracs[1], QsClass{{make_rat(99), make_rat(2)}});
    CHECK(build_aggregator(priors, values, QsClass{{make_rat(7), make_rat(7)}}).coords ==
          Vec{make_rat(1), make_rat(2)});

    CoherentFamily clash;
    clash.entries.emplace_back(diracs[0], QsClass{{make_rat(1), make_rat(0)}});
    clash.entries.emplace_back(uniform(priors), QsClass{{make_rat(3), make_rat(4)}});
    CHECK_THROWS_AS(build_aggregator(priors, clash, QsClass{zeros(2)}), input_error);
}

TEST_CASE("stability matches sensitivity and exhibits witnesses") {
    auto priors = dirac_pair_abc();
    auto diracs = dirac_alternative(priors);

    auto stable = is_Q_stable(unit_box(priors), diracs);
    CHECK(stable.stable);
    CHECK(stable.families_probed > 0);

    // The indicator points are not stable: the aggregator of the indicator
    // family is the all-ones vector, which is not among them.
    RobustSet indicators =
        make_generator_set(priors, {{make_rat(1), make_rat(0)}, {make_rat(0), make_rat(1)}});
    auto unstable = is_Q_stable(indicators, diracs);
    CHECK(!unstable.stable);
    REQUIRE(unstable.witness_aggregator.has_value());
    CHECK(!set_member(indicators, *unstable.witness_aggregator));
    REQUIRE(unstable.witness_family.has_value());
    for (const auto& [q, xq] : unstable.witness_family->entries)
        CHECK(set_member(indicators, xq.coords));

    // Single full-support model: everything is stable.
    auto full = is_Q_stable(diagonal_set(priors), {uniform(priors)});
    CHECK(full.stable);
}

TEST_CASE("local condition sets") {
    auto priors = dirac_pair_abc();
    auto diracs = dirac_alternative(priors);

    // Uniform bound tests per Dirac model: the intersection is the box.
    std::vector<LocalTest> tests;
    for (int i = 0; i < 2; ++i) {
        LocalTest t;
        t.q_index = i;
        Row r{zeros(2), make_rat(1)};
        r.a[i] = 1;
        t.rows.push_back(r);
        tests.push_back(t);
    }
    RobustSet s = local_condition_set(priors, diracs, Quantifier::forall, tests);
    CHECK(robust_set_equal(s, unit_box(priors)));

    // Supermartingale-style test under the uniform model.
    std::vector<LocalTest> smart;
    LocalTest t;
    t.q_index = 0;
    t.rows.push_back({{make_rat(1, 2), make_rat(1, 2)}, make_rat(1)});
    smart.push_back(t);
    RobustSet sm = local_condition_set(priors, {uniform(priors)}, Quantifier::forall, smart);
    std::vector<Event> trivial{Event::all(3)};
    CHECK(robust_set_equal(
        sm, supermartingale_set(priors, trivial, QsClass{{make_rat(1), make_rat(1)}},
                                {uniform(priors)})));

    // Exists-quantifier over nested boundedness levels picks the largest.
    std::vector<LocalTest> nested;
    for (int level : {1, 2}) {
        LocalTest lt;
        lt.q_index = 0;
        Row r{zeros(2), make_rat(level)};
        r.a[0] = 1;
        lt.rows.push_back(r);
        nested.push_back(lt);
    }
    RobustSet ex = local_condition_set(priors, diracs, Quantifier::exists, nested);
    CHECK(set_member(ex, {make_rat(2), make_rat(1000)}));
    CHECK(!set_member(ex, {make_rat(17, 8), make_rat(0)}));

    // Off-support coordinates are rejected.
    std::vector<LocalTest> bad;
    LocalTest b;
    b.q_index = 0;  // dirac at the first atom
    b.rows.push_back({{make_rat(0), make_rat(1)}, make_rat(1)});
    bad.push_back(b);
    CHECK_THROWS_AS(local_condition_set(priors, diracs, Quantifier::forall, bad), input_error);

    CHECK_THROWS_AS(local_condition_set(priors, {}, Quantifier::forall, tests), input_error);
}
