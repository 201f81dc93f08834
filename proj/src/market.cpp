#include "rbp/market.hpp"

#include <algorithm>

#include "rbp/simplex.hpp"

namespace rbp {

namespace {

bool block_constant(const Vec& values, const Event& block) {
    std::optional<Rat> v;
    for (size_t a = 0; a < block.members.size(); ++a) {
        if (!block.members[a]) continue;
        if (!v)
            v = values[a];
        else if (*v != values[a])
            return false;
    }
    return true;
}

}  // namespace

MarketModel make_market(FiniteSpace space, std::vector<std::vector<Event>> filtration,
                        std::vector<std::vector<Vec>> prices,
                        std::vector<ProbabilityMeasure> priors) {
    const int n = space.n();
    if (filtration.size() < 2) throw input_error("market needs at least one period");
    if (prices.empty()) throw input_error("market needs at least one asset");

    for (const auto& partition : filtration) {
        std::vector<int> cover(n, 0);
        for (const auto& block : partition) {
            if ((int)block.members.size() != n)
                throw input_error("partition block over a different space");
            for (int a = 0; a < n; ++a)
                if (block.members[a]) ++cover[a];
        }
        for (int a = 0; a < n; ++a)
            if (cover[a] != 1) throw input_error("filtration level is not a partition");
    }
    if (filtration[0].size() != 1) throw input_error("filtration must start trivially");
    for (size_t t = 0; t + 1 < filtration.size(); ++t) {
        // Each later block must sit inside one earlier block.
        for (const auto& fine : filtration[t + 1]) {
            bool nested = false;
            for (const auto& coarse : filtration[t]) {
                bool inside = true;
                for (int a = 0; a < n; ++a)
                    if (fine.members[a] && !coarse.members[a]) inside = false;
                if (inside) {
                    nested = true;
                    break;
                }
            }
            if (!nested) throw input_error("filtration does not refine");
        }
    }
    for (const auto& asset : prices) {
        if (asset.size() != filtration.size())
            throw input_error("price path length must match the filtration");
        for (size_t t = 0; t < asset.size(); ++t) {
            if ((int)asset[t].size() != n) throw input_error("price vector has wrong dimension");
            for (const auto& block : filtration[t]) {
                if (!block_constant(asset[t], block))
                    throw input_error("price not measurable at its trading date");
            }
        }
    }
    PriorSet ps(space, std::move(priors));
    return MarketModel{std::move(space), std::move(filtration), std::move(prices), std::move(ps)};
}

RobustSet superhedge_set(const MarketModel& market) {
    const PriorSet& priors = market.priors;
    const int q = priors.qdim();
    const int T = market.periods();

    // Strategy variables: one per (t, block of partition t, asset), split
    // into positive and negative parts so the whole lift stays in the
    // orthant. Blocks without non-polar atoms never enter a constraint.
    struct Slot {
        int t, block, asset;
    };
    std::vector<Slot> slots;
    for (int t = 0; t < T; ++t) {
        for (int b = 0; b < (int)market.filtration[t].size(); ++b) {
            bool relevant = false;
            for (int i = 0; i < q; ++i)
                relevant = relevant || market.filtration[t][b].members[priors.nonpolar[i]];
            if (!relevant) continue;
            for (int d = 0; d < market.assets(); ++d) slots.push_back({t, b, d});
        }
    }

    HPolyhedron lift;
    lift.dim = q + 2 * (int)slots.size();
    lift.lifted = 2 * (int)slots.size();
    lift.nonneg = true;
    for (int i = 0; i < q; ++i) {
        const int atom = priors.nonpolar[i];
        Row r{zeros(lift.dim), Rat(1)};  // X(w) - wealth(w) <= 1
        r.a[i] = 1;
        for (size_t sidx = 0; sidx < slots.size(); ++sidx) {
            const Slot& sl = slots[sidx];
            if (!market.filtration[sl.t][sl.block].members[atom]) continue;
            Rat ds = market.prices[sl.asset][sl.t + 1][atom] - market.prices[sl.asset][sl.t][atom];
            r.a[q + 2 * sidx] = -ds;
            r.a[q + 2 * sidx + 1] = ds;
        }
        lift.rows.push_back(std::move(r));
    }
    return make_poly_set(priors, resolved(lift), SetOrigin::derived);
}

HPolyhedron martingale_measures(const MarketModel& market) {
    const PriorSet& priors = market.priors;
    const int q = priors.qdim();
    HPolyhedron poly = HPolyhedron::orthant(q);
    Row mass_le{Vec(q, Rat(1)), Rat(1)}, mass_ge{Vec(q, Rat(-1)), Rat(-1)};
    poly.rows.push_back(std::move(mass_le));
    poly.rows.push_back(std::move(mass_ge));
    for (int t = 0; t < market.periods(); ++t) {
        for (const auto& block : market.filtration[t]) {
            for (int d = 0; d < market.assets(); ++d) {
                Row eq{zeros(q), Rat(0)};
                bool nontrivial = false;
                for (int i = 0; i < q; ++i) {
                    const int atom = priors.nonpolar[i];
                    if (!block.members[atom]) continue;
                    eq.a[i] = market.prices[d][t + 1][atom] - market.prices[d][t][atom];
                    if (eq.a[i] != 0) nontrivial = true;
                }
                if (!nontrivial) continue;
                Row eq_neg{eq.a, Rat(0)};
                for (auto& c : eq_neg.a) c = -c;
                poly.rows.push_back(std::move(eq));
                poly.rows.push_back(std::move(eq_neg));
            }
        }
    }
    return normalize(poly);
}

DualMartingaleReport verify_dual_martingale(const MarketModel& market) {
    DualMartingaleReport rep;
    RobustSet c = superhedge_set(market);

    HPolyhedron polar = resolved(polar_ca(c).poly);
    polar.rows.push_back({Vec(polar.dim, Rat(1)), Rat(1)});
    polar.rows.push_back({Vec(polar.dim, Rat(-1)), Rat(-1)});
    rep.polar_probabilities = normalize(polar);
    rep.martingale_polytope = martingale_measures(market);

    auto fwd = contains(rep.polar_probabilities, rep.martingale_polytope);
    auto bwd = contains(rep.martingale_polytope, rep.polar_probabilities);
    rep.match = fwd.contained && bwd.contained;
    if (!fwd.contained) {
        // A martingale measure that fails the polar test: re-verify by
        // maximizing the claim value under it.
        rep.counterexample = fwd.witness;
        auto sup = lp_optimize(*fwd.witness, member_poly(c), Sense::maximize);
        if (sup.status == LpStatus::optimal && sup.value <= 1)
            throw internal_error("dual martingale counterexample failed re-verification");
    } else if (!bwd.contained) {
        rep.counterexample = bwd.witness;
        if (member(rep.martingale_polytope, *bwd.witness))
            throw internal_error("dual martingale counterexample failed re-verification");
    }
    return rep;
}

RobustSet acceptance_set(const AcceptanceSpec& spec, const PriorSet& priors) {
    if (spec.entries.empty()) throw input_error("acceptance_set: no per-model entries");
    std::optional<RobustSet> acc;
    std::vector<ProbabilityMeasure> qset;
    for (const auto& [q, region] : spec.entries) {
        qset.push_back(q);
        RobustSet cyl = preimage_jQ(region, priors, q);
        acc = acc ? intersect_sets(*acc, cyl) : cyl;
    }
    if (!is_sensitive(*acc, qset).sensitive)
        throw internal_error("acceptance set failed sensitivity with its own models");

    // Dual characterization: members pass every per-model density test.
    KsPolar polar = polar_ks(*acc, qset);
    std::vector<Vec> samples = vertex_enumerate(*acc->poly);
    if (samples.size() > 16) samples.resize(16);
    for (const auto& x : samples) {
        for (const auto& entry : polar.entries) {
            Vec weighted(entry.positions.size());
            for (size_t k = 0; k < entry.positions.size(); ++k) {
                int pos = entry.positions[k];
                weighted[k] = entry.q.weights[priors.nonpolar[pos]] * x[pos];
            }
            Vec obj = weighted;
            obj.resize(entry.feasible_z.dim, Rat(0));
            auto sup = lp_optimize(obj, entry.feasible_z, Sense::maximize);
            if (sup.status == LpStatus::unbounded || (sup.status == LpStatus::optimal && sup.value > 1))
                throw internal_error("acceptance member failed a dual density test");
        }
    }

    // When every per-model region is solid (besides convex and closed, which
    // H-forms are), the set is a bipolar fixed point.
    bool all_solid = true;
    for (const auto& [q, region] : spec.entries) {
        HPolyhedron r = resolved(region);
        all_solid = all_solid && contains(r, solid_downset(r)).contained;
    }
    if (all_solid) {
        RobustSet fixed = bipolar_lifted(*acc, qset);
        if (!robust_set_equal(*acc, fixed))
            throw internal_error("acceptance set is not a bipolar fixed point");
    }
    return *acc;
}

}  // namespace rbp
