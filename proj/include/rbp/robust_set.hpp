#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rbp/model.hpp"
#include "rbp/polyhedron.hpp"

namespace rbp {

enum class SetOrigin { constraints, generators, derived };

/**
 * A subset of the non-negative quotient cone over a prior set, in one of two
 * presentations:
 *
 *   - H-form: a polyhedron over the quotient coordinates (possibly with
 *     lifted auxiliary coordinates), always inside the orthant;
 *   - generator form: a literal finite list of points.
 *
 * Generator-form sets are deliberately NOT convexified: the bipolar and
 * sensitivity checkers need non-convex, non-solid inputs to exercise the
 * "only if" directions, so predicates operate on the literal member set.
 */
struct RobustSet {
    PriorSet priors;
    std::optional<HPolyhedron> poly;
    std::vector<Vec> points;  // sorted, deduplicated
    SetOrigin origin = SetOrigin::derived;

    bool polyhedral() const { return poly.has_value(); }
    int qdim() const { return priors.qdim(); }
};

struct GeneratorSet {
    std::vector<Vec> points;  // non-empty, in the orthant
};

struct SolidityReport {
    bool solid = false;
    // (X in S, Y <= X, Y not in S) when not solid.
    std::optional<std::pair<Vec, Vec>> witness;
};

struct ClosednessReport {
    bool preconditions_hold = false;  // solid + sensitive w.r.t. the given Qset
    bool seq_order_closed = false;
    bool order_closed = false;
    bool qset_closed = false;
    std::vector<bool> locally_q_closed;
    std::vector<bool> image_q_closed;
    bool all_agree() const;
};

// Image of the member set under j_Q: coordinates restricted to supp(Q).
struct JQImage {
    std::vector<int> positions;  // quotient positions forming supp(Q)
    std::optional<HPolyhedron> poly;
    std::vector<Vec> points;
};

RobustSet make_poly_set(const PriorSet& priors, HPolyhedron poly,
                        SetOrigin origin = SetOrigin::derived);
RobustSet make_generator_set(const PriorSet& priors, std::vector<Vec> points);
RobustSet full_orthant(const PriorSet& priors);

bool set_member(const RobustSet& s, const Vec& x);
bool set_is_empty(const RobustSet& s);

// {X >= 0 : <mu_i, X> <= a_i}. Measures must be dominated and nonnegative;
// the result is sensitive with reduction set {mu_i / mu_i(Omega)}.
RobustSet from_constraints(const PriorSet& priors,
                           const std::vector<std::pair<Measure, Rat>>& constraints);

// Smallest convex, solid, closed superset of a finite generator list.
RobustSet smallest_closed_convex_solid(const PriorSet& priors, const GeneratorSet& gen);

SolidityReport is_solid(const RobustSet& s);

// Literal convexity of the member set (always true in H-form; a finite set
// of two or more distinct points fails on a midpoint).
bool is_convex(const RobustSet& s, std::optional<Vec>* midpoint_witness = nullptr);

JQImage image_jQ(const RobustSet& s, const ProbabilityMeasure& q);

// Cylinder over D intersected with the orthant.
RobustSet preimage_jQ(const HPolyhedron& d, const PriorSet& priors,
                      const ProbabilityMeasure& q);

// {X : 0 <= X <= Y}.
RobustSet bounded_by(const PriorSet& priors, const QsClass& y);

// Uniform supermartingale condition: for every Q in qset and every partition
// block B with Q(B) > 0, the conditional expectation of X on B is at most
// the block value of Y. Encoded multiplicatively, so Q(B) = 0 blocks impose
// no constraint.
RobustSet supermartingale_set(const PriorSet& priors, const std::vector<Event>& partition,
                              const QsClass& y,
                              const std::vector<ProbabilityMeasure>& qset);

ClosednessReport is_closed_all_notions(const RobustSet& s,
                                       const std::vector<ProbabilityMeasure>& qset);

// Intersection of member sets over a common prior set.
RobustSet intersect_sets(const RobustSet& a, const RobustSet& b);

// H-form of the member set with any lifted coordinates eliminated.
HPolyhedron member_poly(const RobustSet& s);

}  // namespace rbp
