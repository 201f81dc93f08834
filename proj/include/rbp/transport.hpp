#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rbp/duality.hpp"
#include "rbp/robust_set.hpp"

namespace rbp {

/**
 * Product of two finite prior models. Product atoms are all pairs of factor
 * atoms (labelled "a|b"); the default product priors are all pairwise
 * products of the factor generators, whose polar structure makes an atom
 * pair non-polar exactly when both factors are.
 */
struct ProductModel {
    PriorSet p1, p2;
    PriorSet product;
    // For each product quotient position, the factor quotient positions.
    std::vector<std::pair<int, int>> factor_positions;
};

ProductModel make_product_model(const PriorSet& p1, const PriorSet& p2);

// As above but with caller-supplied coupling priors, which must induce the
// same polar structure as the generator products.
ProductModel make_product_model(const PriorSet& p1, const PriorSet& p2,
                                std::vector<ProbabilityMeasure> couplings);

// Marginal constraint system: each M_i is the measure polar of a defining
// set C_i, canonicalized to its bipolar so that C_i = C_i^{oo} holds.
struct MarginalSystem {
    RobustSet c1, c2;
    HPolyhedron m1, m2;  // resolved polars over the factor quotient coords
};

MarginalSystem make_marginal_system(const RobustSet& c1, const RobustSet& c2);

struct PrimalSolution {
    Rat value;
    Vec mu;  // over product quotient coordinates
};

struct DualSolution {
    Rat value;
    Vec x1, x2;
};

struct TransportReport {
    Rat primal_value, dual_value;
    Vec optimal_mu;
    Vec optimal_x1, optimal_x2;
    bool gap_zero = false;
    bool c_equals_d = false;
    bool polar_identity = false;  // polar of C = M = polar of D
    bool degenerate = false;      // primal value 0
};

// max <X, mu> over product measures mu >= 0 whose marginals lie in M1, M2.
PrimalSolution relaxed_primal(const Vec& x, const ProductModel& model,
                              const MarginalSystem& sys);

// min of the two marginal support functions over admissible splittings
// X <= X1 (+) X2, as one exact LP with the support functions dualized in.
DualSolution dual_min(const Vec& x, const ProductModel& model, const MarginalSystem& sys);

// Runs both problems, asserts weak then exact strong duality, materializes
// the sets C (splittable at cost 1) and D (dual-feasible at level 1) as
// polyhedra, and asserts C = D together with polar(C) = M = polar(D).
TransportReport check_no_gap(const Vec& x, const ProductModel& model,
                             const MarginalSystem& sys);

struct MarginalPolarReport {
    bool holds = false;
    int probes = 0;
};

// Probes the identity sup_{X in C} int X dmu = max_i sup_{X_i in C_i}
// int X_i dmu_i on the vertices of a probe polytope of product measures.
MarginalPolarReport marginal_polar_identity(const ProductModel& model,
                                            const MarginalSystem& sys);

}  // namespace rbp
