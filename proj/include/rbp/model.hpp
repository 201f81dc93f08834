#pragma once

#include <string>
#include <vector>

#include "rbp/rational.hpp"

namespace rbp {

// Finite sample space: the sigma-algebra is the full power set and every
// vector in the library is indexed by this fixed atom order.
struct FiniteSpace {
    std::vector<std::string> atoms;

    explicit FiniteSpace(std::vector<std::string> labels);
    int n() const { return (int)atoms.size(); }
    int index(const std::string& label) const;
};

// Countably additive set function on a finite space, i.e. a signed weight
// per atom. Weights may be negative; see total_variation.
struct Measure {
    Vec weights;

    bool nonnegative() const {
        for (const auto& w : weights)
            if (w < 0) return false;
        return true;
    }
    Rat total() const {
        Rat s(0);
        for (const auto& w : weights) s += w;
        return s;
    }
};

struct ProbabilityMeasure {
    Vec weights;  // nonnegative, sums to exactly 1

    explicit ProbabilityMeasure(Vec w);
    Measure as_measure() const { return Measure{weights}; }
};

// Subset of atoms with bitset semantics.
struct Event {
    std::vector<bool> members;

    static Event none(int n) { return Event{std::vector<bool>(n, false)}; }
    static Event all(int n) { return Event{std::vector<bool>(n, true)}; }
    static Event singleton(int n, int atom);
    bool empty() const {
        for (bool b : members)
            if (b) return false;
        return true;
    }
};

/**
 * A finite family of probability measures together with everything derived
 * from it: the induced upper probability c(A) = max_P P(A), the polar atoms
 * (those with c({w}) = 0), and the coordinate system of the quotient space
 * of quasi-sure equivalence classes, which on a finite space is simply the
 * vector of values on the non-polar atoms.
 *
 * Derived data is recomputed at construction and the value is immutable, so
 * it can never go stale.
 */
struct PriorSet {
    FiniteSpace space;
    std::vector<ProbabilityMeasure> generators;
    std::vector<int> nonpolar;  // ascending atom indices with c({w}) > 0

    PriorSet(FiniteSpace s, std::vector<ProbabilityMeasure> gens);
    int qdim() const { return (int)nonpolar.size(); }
    bool atom_polar(int atom) const;
};

// Equivalence class of random variables up to quasi-sure equality: the
// coordinates on the non-polar atoms of the ambient PriorSet.
struct QsClass {
    Vec coords;
};

enum class QsOrder { leq, geq, eq, incomparable };

Rat upper_probability(const PriorSet& priors, const Event& event);
bool is_polar(const PriorSet& priors, const Event& event);

// Drops the polar coordinates; raw vectors equal outside a polar event map
// to the identical class.
QsClass quotient(const PriorSet& priors, const Vec& raw);

// Any filling of the polar coordinates; quotient(embed(X)) == X.
Vec embed(const PriorSet& priors, const QsClass& x, const Rat& fill = Rat(0));

QsOrder qs_compare(const PriorSet& priors, const QsClass& x, const QsClass& y);

// |mu| charges no polar atom.
bool is_dominated(const Measure& mu, const PriorSet& priors);

Measure total_variation(const Measure& mu);

// The order support S(mu): on a finite space, the atoms charged by |mu|.
// Both defining clauses (mu vanishes off the support; mu-null subsets of the
// support are polar) are asserted before returning.
Event order_support(const Measure& mu, const PriorSet& priors);

// {delta_w : w non-polar}: an equivalent family of supported measures with
// pairwise disjoint supports. The equivalence with the priors is re-verified.
std::vector<ProbabilityMeasure> disjoint_supported_alternative(const PriorSet& priors);

// Restriction of the class to the support of Q (the map into L0_Q).
Vec project_jQ(const PriorSet& priors, const QsClass& x, const ProbabilityMeasure& q);

// Ascending non-polar atom indices charged by q, as positions 0..qdim-1
// within the quotient coordinates.
std::vector<int> support_positions(const PriorSet& priors, const ProbabilityMeasure& q);

std::vector<ProbabilityMeasure> dirac_alternative(const PriorSet& priors);

}  // namespace rbp
