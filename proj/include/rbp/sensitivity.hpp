#pragma once

#include <optional>
#include <tuple>
#include <vector>

#include "rbp/robust_set.hpp"

namespace rbp {

struct SensitivityReport {
    bool sensitive = false;
    RobustSet envelope;
    std::optional<Vec> witness;  // member of envelope \ S when not sensitive
};

// Per-model classes (X_Q)_Q: candidates for pasting into one class.
struct CoherentFamily {
    std::vector<std::pair<ProbabilityMeasure, QsClass>> entries;
};

struct CoherenceReport {
    bool coherent = false;
    // (entry index, entry index, atom index) with conflicting values.
    std::optional<std::tuple<int, int, int>> conflict;
};

struct StabilityReport {
    bool stable = false;
    std::optional<CoherentFamily> witness_family;
    std::optional<Vec> witness_aggregator;
    int families_probed = 0;
};

struct IntersectionReport {
    RobustSet result;
    bool all_inputs_sensitive = false;
    bool intersection_sensitive = false;
};

enum class Quantifier { exists, forall };

// One local defining condition for model qset[q_index]: linear threshold
// rows over the quotient coordinates that may only touch supp(Q).
struct LocalTest {
    int q_index = 0;
    std::vector<Row> rows;
};

// The smallest superset of S determined by its per-model images over the
// reduction set: the intersection of the cylinders over the j_Q images.
RobustSet sensitive_envelope(const RobustSet& s, const std::vector<ProbabilityMeasure>& qset);

// S is sensitive iff it equals its envelope. A sensitive verdict is probed
// once more against a strictly larger reduction set (supersets of reduction
// sets stay reduction sets).
SensitivityReport is_sensitive(const RobustSet& s, const std::vector<ProbabilityMeasure>& qset);

// Intersection of sensitive sets is sensitive with the union reduction set;
// the claim is re-verified on the computed intersection.
IntersectionReport intersection_preserves(const std::vector<RobustSet>& sets,
                                          const std::vector<std::vector<ProbabilityMeasure>>& qsets);

CoherenceReport is_coherent(const PriorSet& priors, const CoherentFamily& fam);

// Pastes the per-model values along the supports, using `fill` on atoms not
// covered by any support. Requires coherence.
QsClass build_aggregator(const PriorSet& priors, const CoherentFamily& fam, const QsClass& fill);

// Decides stability via the equivalence with sensitivity, then confirms the
// verdict independently: sampled coherent families drawn from S must
// aggregate inside S, and a non-sensitive set must exhibit an explicit
// coherent family whose aggregator escapes. Disagreement raises.
StabilityReport is_Q_stable(const RobustSet& s, const std::vector<ProbabilityMeasure>& qset);

// Materializes an intersection of per-model almost-sure conditions given by
// finitely many linear threshold tests, and asserts the result is sensitive
// with the given reduction set.
RobustSet local_condition_set(const PriorSet& priors,
                              const std::vector<ProbabilityMeasure>& qset, Quantifier quant,
                              const std::vector<LocalTest>& tests);

}  // namespace rbp
