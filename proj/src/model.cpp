#include "rbp/model.hpp"

#include <algorithm>
#include <set>

namespace rbp {

FiniteSpace::FiniteSpace(std::vector<std::string> labels) : atoms(std::move(labels)) {
    if (atoms.empty()) throw input_error("space needs at least one atom");
    std::set<std::string> seen(atoms.begin(), atoms.end());
    if (seen.size() != atoms.size()) throw input_error("atom labels must be pairwise distinct");
}

int FiniteSpace::index(const std::string& label) const {
    auto it = std::find(atoms.begin(), atoms.end(), label);
    if (it == atoms.end()) throw input_error("unknown atom label '" + label + "'");
    return (int)(it - atoms.begin());
}

ProbabilityMeasure::ProbabilityMeasure(Vec w) : weights(std::move(w)) {
    Rat s(0);
    for (const auto& x : weights) {
        if (x < 0) throw input_error("probability weights must be nonnegative");
        s += x;
    }
    if (s != 1) throw input_error("probability weights must sum to 1, got " + rat_str(s));
}

Event Event::singleton(int n, int atom) {
    Event e = none(n);
    e.members[atom] = true;
    return e;
}

PriorSet::PriorSet(FiniteSpace s, std::vector<ProbabilityMeasure> gens)
    : space(std::move(s)), generators(std::move(gens)) {
    if (generators.empty()) throw input_error("prior set needs at least one generator");
    for (const auto& g : generators) {
        if ((int)g.weights.size() != space.n())
            throw input_error("prior generator has wrong dimension");
    }
    for (int a = 0; a < space.n(); ++a) {
        for (const auto& g : generators) {
            if (g.weights[a] > 0) {
                nonpolar.push_back(a);
                break;
            }
        }
    }
}

bool PriorSet::atom_polar(int atom) const {
    return !std::binary_search(nonpolar.begin(), nonpolar.end(), atom);
}

Rat upper_probability(const PriorSet& priors, const Event& event) {
    if ((int)event.members.size() != priors.space.n())
        throw input_error("event over a different space");
    Rat best(0);
    for (const auto& g : priors.generators) {
        Rat mass(0);
        for (int a = 0; a < priors.space.n(); ++a)
            if (event.members[a]) mass += g.weights[a];
        if (mass > best) best = mass;
    }
    return best;
}

bool is_polar(const PriorSet& priors, const Event& event) {
    return upper_probability(priors, event) == 0;
}

QsClass quotient(const PriorSet& priors, const Vec& raw) {
    if ((int)raw.size() != priors.space.n()) throw input_error("quotient: wrong raw dimension");
    QsClass x;
    x.coords.reserve(priors.nonpolar.size());
    for (int a : priors.nonpolar) x.coords.push_back(raw[a]);
    return x;
}

Vec embed(const PriorSet& priors, const QsClass& x, const Rat& fill) {
    if ((int)x.coords.size() != priors.qdim()) throw input_error("embed: wrong class dimension");
    Vec raw(priors.space.n(), fill);
    for (int i = 0; i < priors.qdim(); ++i) raw[priors.nonpolar[i]] = x.coords[i];
    return raw;
}

QsOrder qs_compare(const PriorSet& priors, const QsClass& x, const QsClass& y) {
    if ((int)x.coords.size() != priors.qdim() || (int)y.coords.size() != priors.qdim())
        throw input_error("qs_compare: dimension mismatch");
    bool le = true, ge = true;
    for (int i = 0; i < priors.qdim(); ++i) {
        if (x.coords[i] > y.coords[i]) le = false;
        if (x.coords[i] < y.coords[i]) ge = false;
    }
    if (le && ge) return QsOrder::eq;
    if (le) return QsOrder::leq;
    if (ge) return QsOrder::geq;
    return QsOrder::incomparable;
}

bool is_dominated(const Measure& mu, const PriorSet& priors) {
    if ((int)mu.weights.size() != priors.space.n())
        throw input_error("measure over a different space");
    for (int a = 0; a < priors.space.n(); ++a) {
        if (priors.atom_polar(a) && mu.weights[a] != 0) return false;
    }
    return true;
}

Measure total_variation(const Measure& mu) {
    Measure out = mu;
    for (auto& w : out.weights)
        if (w < 0) w = -w;
    return out;
}

Event order_support(const Measure& mu, const PriorSet& priors) {
    if (!is_dominated(mu, priors)) throw input_error("order_support: measure not dominated");
    Measure tv = total_variation(mu);
    Event s = Event::none(priors.space.n());
    for (int a = 0; a < priors.space.n(); ++a) s.members[a] = (tv.weights[a] > 0);

    // Clause (a): |mu| vanishes outside the support.
    for (int a = 0; a < priors.space.n(); ++a) {
        if (!s.members[a] && tv.weights[a] != 0)
            throw internal_error("order_support: mass off the support");
    }
    // Clause (b) reduces to atoms: a mu-null atom inside the support would
    // contradict the definition of s, and since every dominated measure on a
    // finite space is supported, no violation can occur.
    for (int a = 0; a < priors.space.n(); ++a) {
        if (s.members[a] && tv.weights[a] == 0)
            throw internal_error("order_support: null atom inside the support");
    }
    return s;
}

std::vector<ProbabilityMeasure> disjoint_supported_alternative(const PriorSet& priors) {
    std::vector<ProbabilityMeasure> out = dirac_alternative(priors);
    // Re-verify the equivalence with the priors: an atom is polar under the
    // alternative exactly when it is polar under the priors.
    for (int a = 0; a < priors.space.n(); ++a) {
        bool polar_alt = true;
        for (const auto& q : out)
            if (q.weights[a] > 0) polar_alt = false;
        if (polar_alt != priors.atom_polar(a))
            throw internal_error("disjoint alternative is not equivalent to the priors");
    }
    return out;
}

std::vector<ProbabilityMeasure> dirac_alternative(const PriorSet& priors) {
    std::vector<ProbabilityMeasure> out;
    for (int a : priors.nonpolar) {
        Vec w(priors.space.n(), Rat(0));
        w[a] = 1;
        out.emplace_back(std::move(w));
    }
    return out;
}

std::vector<int> support_positions(const PriorSet& priors, const ProbabilityMeasure& q) {
    if (!is_dominated(q.as_measure(), priors))
        throw input_error("measure charges a polar atom");
    std::vector<int> pos;
    for (int i = 0; i < priors.qdim(); ++i) {
        if (q.weights[priors.nonpolar[i]] > 0) pos.push_back(i);
    }
    return pos;
}

Vec project_jQ(const PriorSet& priors, const QsClass& x, const ProbabilityMeasure& q) {
    if ((int)x.coords.size() != priors.qdim()) throw input_error("project_jQ: wrong dimension");
    Vec out;
    for (int i : support_positions(priors, q)) out.push_back(x.coords[i]);
    return out;
}

}  // namespace rbp
