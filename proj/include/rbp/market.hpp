#pragma once

#include <optional>
#include <vector>

#include "rbp/duality.hpp"
#include "rbp/robust_set.hpp"

namespace rbp {

/**
 * Finite discrete-time market: a refining filtration of atom partitions with
 * trivial start, block-constant discounted prices per asset and time, and a
 * prior set on the terminal atoms. Strategies are block-constant on the
 * partition of their trading date (predictability) and enter the terminal
 * wealth via the telescoped increment sum.
 */
struct MarketModel {
    FiniteSpace space;
    std::vector<std::vector<Event>> filtration;  // partitions, t = 0..T
    std::vector<std::vector<Vec>> prices;        // [asset][t] atom-indexed
    PriorSet priors;

    int periods() const { return (int)filtration.size() - 1; }
    int assets() const { return (int)prices.size(); }
};

MarketModel make_market(FiniteSpace space, std::vector<std::vector<Event>> filtration,
                        std::vector<std::vector<Vec>> prices,
                        std::vector<ProbabilityMeasure> priors);

// Claims super-replicable at cost 1: X >= 0 with X <= 1 + terminal wealth of
// some predictable strategy, quasi-surely. Strategy variables are eliminated
// exactly, leaving an H-form set over the quotient coordinates.
RobustSet superhedge_set(const MarketModel& market);

// {Q >= 0 on non-polar atoms : sum Q = 1, each price increment has zero
// conditional expectation on every positive-mass block}. Encoded
// multiplicatively, so zero-mass blocks impose no condition.
HPolyhedron martingale_measures(const MarketModel& market);

struct DualMartingaleReport {
    bool match = false;
    HPolyhedron polar_probabilities;  // polar of the superhedge set cut to probabilities
    HPolyhedron martingale_polytope;
    std::optional<Vec> counterexample;
};

// The dual characterization: the probability slice of the superhedge polar
// coincides with the martingale polytope; on mismatch the report carries a
// verified counterexample measure.
DualMartingaleReport verify_dual_martingale(const MarketModel& market);

// Per-model acceptance regions over supp(Q) coordinates.
struct AcceptanceSpec {
    std::vector<std::pair<ProbabilityMeasure, HPolyhedron>> entries;
};

// Intersection of the per-model acceptance cylinders with the cone of
// non-negative losses. Asserts sensitivity with the entry models as
// reduction set and re-verifies the dual test-function characterization on
// sampled members.
RobustSet acceptance_set(const AcceptanceSpec& spec, const PriorSet& priors);

}  // namespace rbp
