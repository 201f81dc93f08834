#pragma once

#include <optional>
#include <vector>

#include "rbp/polyhedron.hpp"
#include "rbp/rational.hpp"

namespace rbp {

// Description of a set whose closed convex solid hull the oracle decides
// membership in: either a finite generator list or a resolved H-form.
struct OracleSetDescription {
    std::vector<Vec> generators;
    std::optional<HPolyhedron> constraints;
};

// Feasibility of {y >= 0 : M y <= r}, decided by a self-contained dictionary
// simplex using Dantzig's entering rule with a lexicographic ratio test.
// Shares no code with the main solver; used as the independent cross-check
// path in acceptance testing.
bool oracle_feasible(const std::vector<Vec>& m_rows, const Vec& rhs);

// Decides x in smallest_closed_convex_solid(S) for at most 3 coordinates.
// Exact verdict from the independent LP; for generator descriptions a grid
// search over convex weights with denominator `max_denominator` additionally
// cross-checks positive verdicts.
bool oracle_membership(const OracleSetDescription& desc, const Vec& x, int max_denominator);

}  // namespace rbp
