#pragma once

#include <optional>
#include <vector>

#include "rbp/rational.hpp"

namespace rbp {

// One linear constraint  <coeffs, x> <= offset.
struct Row {
    Vec a;
    Rat b;
};

/**
 * Polyhedron in H-form over an ambient space of `dim` coordinates, the last
 * `lifted` of which are existentially quantified auxiliary coordinates.
 *
 * A point y of dimension dim-lifted is a member iff some assignment of the
 * lifted coordinates satisfies every row (and the orthant condition when
 * `nonneg` is set, which applies to all dim coordinates).
 *
 * The empty polyhedron is a first-class value; operations never treat
 * emptiness as an error.
 */
struct HPolyhedron {
    int dim = 0;
    int lifted = 0;
    bool nonneg = false;
    std::vector<Row> rows;

    int member_dim() const { return dim - lifted; }

    static HPolyhedron orthant(int d) { return HPolyhedron{d, 0, true, {}}; }
};

struct ContainmentVerdict {
    bool contained = false;
    std::optional<Vec> witness;  // point of B outside A, member coordinates
};

// Canonical row scaling, duplicate removal, single-row domination pruning.
// Keeps at most one witness row for infeasibility (0 <= b with b < 0).
HPolyhedron normalize(const HPolyhedron& poly);

// Exact shadow of the member set onto the coordinates not in `coords`,
// via Fourier-Motzkin elimination. Remaining coordinates are re-indexed in
// increasing order of their original position.
HPolyhedron eliminate(const HPolyhedron& poly, const std::vector<int>& coords);

// Member set with lifted coordinates eliminated (lifted == 0 afterwards).
HPolyhedron resolved(const HPolyhedron& poly);

// Exact membership of a point given in member coordinates.
bool member(const HPolyhedron& poly, const Vec& x);

bool is_empty(const HPolyhedron& poly);

// Is B a subset of A (as member sets)? Witness on failure is a member of B
// that violates A, found by maximizing each constraint gap of A over B.
ContainmentVerdict contains(const HPolyhedron& A, const HPolyhedron& B);

bool set_equal(const HPolyhedron& A, const HPolyhedron& B);

// Smallest solid superset {z >= 0 : exists y in poly with z <= y}.
// Requires the member set to live in the non-negative orthant.
HPolyhedron solid_downset(const HPolyhedron& poly);

// All vertices (basic feasible points) of the resolved member set, sorted
// lexicographically. Intended for bounded sets; recession rays are ignored.
std::vector<Vec> vertex_enumerate(const HPolyhedron& poly);

// Extreme rays of the recession cone of the member set, normalized to unit
// coordinate sum (the member set must live in the orthant, so the cone is
// pointed). Together with vertex_enumerate this is the exact V-description.
std::vector<Vec> recession_rays(const HPolyhedron& poly);

// The homogenization (all offsets zeroed): members are exactly the
// recession directions of the original member set.
HPolyhedron homogenized(const HPolyhedron& poly);

// Lexicographically smallest member of a non-empty polyhedron, computed by
// sequential coordinate minimization. Requires a bounded-below member set
// (always the case under nonneg).
Vec lex_min_point(const HPolyhedron& poly);

// Drops every row implied by the remaining ones (one LP per row); applied
// automatically inside eliminate() once row count exceeds the threshold.
HPolyhedron remove_redundant_rows(const HPolyhedron& poly);

constexpr int kFullRedundancyThreshold = 64;

// Debug dump: one constraint per line, exact rationals.
std::string dump(const HPolyhedron& poly);

}  // namespace rbp
