#pragma once

#include <random>

#include "rbp/duality.hpp"
#include "rbp/robust_set.hpp"

namespace rbp::testing {

// Two non-polar atoms a, b plus a polar atom c.
inline PriorSet dirac_pair_abc() {
    FiniteSpace space({"a", "b", "c"});
    Vec da{make_rat(1), make_rat(0), make_rat(0)};
    Vec db{make_rat(0), make_rat(1), make_rat(0)};
    return PriorSet(space, {ProbabilityMeasure(da), ProbabilityMeasure(db)});
}

inline PriorSet all_diracs(int n) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i));
    FiniteSpace space(std::move(labels));
    std::vector<ProbabilityMeasure> gens;
    for (int i = 0; i < n; ++i) {
        Vec w(n, Rat(0));
        w[i] = 1;
        gens.emplace_back(std::move(w));
    }
    return PriorSet(space, gens);
}

inline ProbabilityMeasure uniform(const PriorSet& priors) {
    Vec w(priors.space.n(), Rat(0));
    for (int a : priors.nonpolar) w[a] = Rat(Int(1), Int(priors.qdim()));
    return ProbabilityMeasure(w);
}

inline RobustSet unit_box(const PriorSet& priors) {
    return bounded_by(priors, QsClass{Vec(priors.qdim(), Rat(1))});
}

// {x >= 0 : x_0 = x_1 = ... <= 1}: convex and closed but neither solid nor
// sensitive for the Dirac reduction set.
inline RobustSet diagonal_set(const PriorSet& priors) {
    HPolyhedron p = HPolyhedron::orthant(priors.qdim());
    for (int i = 0; i + 1 < priors.qdim(); ++i) {
        Row r{zeros(priors.qdim()), Rat(0)};
        r.a[i] = 1;
        r.a[i + 1] = -1;
        p.rows.push_back(r);
        for (auto& c : r.a) c = -c;
        p.rows.push_back(r);
    }
    Row cap{zeros(priors.qdim()), Rat(1)};
    cap.a[0] = 1;
    p.rows.push_back(cap);
    return make_poly_set(priors, p, SetOrigin::derived);
}

// Random H-form set with non-negative rows and bounds: convex, solid,
// closed by construction.
inline RobustSet random_nonneg_rows_set(std::mt19937& rng, const PriorSet& priors,
                                        int max_rows = 6) {
    std::uniform_int_distribution<int> coef(0, 4);
    std::uniform_int_distribution<int> bnd(1, 8);
    std::uniform_int_distribution<int> nrows(1, max_rows);
    const int q = priors.qdim();
    HPolyhedron p = HPolyhedron::orthant(q);
    int rows = nrows(rng);
    for (int r = 0; r < rows; ++r) {
        Row row{Vec(q), make_rat(bnd(rng))};
        bool nonzero = false;
        for (auto& c : row.a) {
            c = make_rat(coef(rng));
            if (c != 0) nonzero = true;
        }
        if (!nonzero) row.a[0] = 1;
        p.rows.push_back(std::move(row));
    }
    // Cap every coordinate so the set is a polytope.
    for (int i = 0; i < q; ++i) {
        Row row{zeros(q), make_rat(bnd(rng))};
        row.a[i] = 1;
        p.rows.push_back(std::move(row));
    }
    return make_poly_set(priors, normalize(p), SetOrigin::constraints);
}

inline RobustSet random_generator_set(std::mt19937& rng, const PriorSet& priors,
                                      int max_points = 4) {
    std::uniform_int_distribution<int> val(0, 4);
    std::uniform_int_distribution<int> npts(2, max_points);
    std::vector<Vec> pts;
    int k = npts(rng);
    for (int j = 0; j < k; ++j) {
        Vec p(priors.qdim());
        for (auto& c : p) c = make_rat(val(rng));
        pts.push_back(std::move(p));
    }
    return make_generator_set(priors, std::move(pts));
}

}  // namespace rbp::testing
