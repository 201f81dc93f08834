#pragma once

#include <optional>
#include <vector>

#include "rbp/robust_set.hpp"
#include "rbp/sensitivity.hpp"

namespace rbp {

// Polar over non-negative finite measures: mu is a member iff every X in the
// primal set integrates against mu to at most 1. Stored in lifted H-form
// obtained from LP duality of the inner supremum; always contains 0 and is
// convex, solid and closed.
struct CaPolar {
    HPolyhedron poly;  // member coords = measure weights on non-polar atoms
};

// Per-model polar: for each Q the polyhedron of densities Z >= 0 on supp(Q)
// with sup_{X in S} E_Q[Z X] <= 1.
struct KsPolarEntry {
    ProbabilityMeasure q;
    std::vector<int> positions;  // supp(Q) as quotient coordinate positions
    HPolyhedron feasible_z;
};

struct KsPolar {
    std::vector<KsPolarEntry> entries;
};

struct BipolarProperties {
    bool convex = false;
    bool solid = false;
    bool closed = false;
    bool sensitive = false;
    bool all() const { return convex && solid && closed && sensitive; }
};

struct BipolarReport {
    bool equal = false;
    BipolarProperties properties;
    std::optional<Vec> witness;      // element of the bipolar outside S
    std::optional<Vec> certificate;  // separating measure for a refuted membership
};

// H-form of {outer : sup_{x in K} <phi(outer), x> <= 1} for a non-empty K
// inside the orthant, where phi_j(outer) = <phi_cols[j], outer>. Obtained
// from LP duality of the inner supremum; the dual multiplier block (one per
// row of K) is lifted. K may itself carry lifted coordinates, which pair
// with weight zero.
HPolyhedron dual_sup_form(const HPolyhedron& k, int outer_dim,
                          const std::vector<Vec>& phi_cols);

CaPolar polar_ca(const RobustSet& s);

// Smallest convex, solid, closed superset of S; cross-checked against the
// polar-of-polar description by mutual containment.
RobustSet bipolar_ca(const RobustSet& s);

KsPolar polar_ks(const RobustSet& s, const std::vector<ProbabilityMeasure>& qset);

// The lifting construction: per model Q, the smallest closed convex solid
// superset of the j_Q image, pulled back through j_Q and intersected.
// Re-verified per model against the dual description from polar_ks.
RobustSet bipolar_lifted(const RobustSet& s, const std::vector<ProbabilityMeasure>& qset);

// The same set derived purely from the dual route (the unbounded dual cone
// collapses onto the bounded one on finite models); kept as an independent
// computation so the equality with bipolar_lifted is a meaningful check.
RobustSet bipolar_diamond(const RobustSet& s, const std::vector<ProbabilityMeasure>& qset);

// The **-route available when the reduction set has pairwise disjoint
// supports; asserts equality with bipolar_lifted.
RobustSet bipolar_star_disjoint(const RobustSet& s,
                                const std::vector<ProbabilityMeasure>& qset);

// bipolar_ca with the minimality property additionally probed against
// sampled convex solid closed supersets.
RobustSet sensitive_smallest_superset(const RobustSet& s);

// Evaluates the four structural properties and the set equality
// S = bipolar_lifted(S, qset), asserts the biconditional between them, and
// attaches a witness from the bipolar when the sets differ.
BipolarReport check_bipolar_theorem(const RobustSet& s,
                                    const std::vector<ProbabilityMeasure>& qset);

// For x outside bipolar_ca(S): a measure mu in the polar with <mu,x> > 1,
// re-verified against sup_{Y in S} <mu,Y> <= 1. nullopt when x is a member.
std::optional<Vec> refute_membership(const RobustSet& s, const Vec& x);

// Exact member-set equality of two sets over the same prior structure.
bool robust_set_equal(const RobustSet& a, const RobustSet& b);

}  // namespace rbp
