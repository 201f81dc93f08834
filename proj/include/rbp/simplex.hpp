#pragma once

#include "rbp/polyhedron.hpp"
#include "rbp/rational.hpp"

namespace rbp {

enum class LpStatus { optimal, unbounded, infeasible };
enum class Sense { maximize, minimize };

/**
 * Outcome of an exact LP solve. Whatever the status, the attached witness
 * exactly satisfies its defining conditions; this is re-checked by
 * substitution before the outcome is returned, and a failed re-check raises
 * internal_error rather than returning a bogus certificate.
 *
 *   optimal:    value and an attaining point.
 *   unbounded:  a feasible point and an improving recession ray.
 *   infeasible: Farkas multipliers lambda >= 0 with lambda^T b < 0 and
 *               lambda^T A >= 0 (= 0 on coordinates without sign constraint).
 */
struct LpOutcome {
    LpStatus status = LpStatus::infeasible;
    Rat value;
    Vec point;
    Vec ray;
    Vec farkas;
};

// Optimizes <objective, x> over the full coordinate space of `poly`
// (including lifted coordinates; pad with zeros to ignore them).
// Bland's rule throughout: deterministic and cycle-free.
LpOutcome lp_optimize(const Vec& objective, const HPolyhedron& poly, Sense sense);

}  // namespace rbp
