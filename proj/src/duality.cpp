#include "rbp/duality.hpp"

#include <algorithm>

#include "rbp/simplex.hpp"

namespace rbp {

namespace {

void require_nonempty(const RobustSet& s, const char* op) {
    if (set_is_empty(s)) throw input_error(std::string(op) + ": set must be non-empty");
}

}  // namespace

// By LP duality, sup_{x in K} <phi(outer), x> <= 1 over K = {x >= 0 : C x <= d}
// holds iff  exists u >= 0 :  C^T u >= phi(outer),  <d, u> <= 1,  so the
// result lives over (outer, u) with the u block lifted.
//
// Pairing lifted coordinates of K with weight zero makes the supremum over
// the lifted set equal the supremum over its projection, which keeps the
// dual multiplier block at the (small, fixed) row count of the lifted
// presentation instead of the row count after elimination.
HPolyhedron dual_sup_form(const HPolyhedron& K, int outer_dim,
                          const std::vector<Vec>& phi_cols) {
    if (!K.nonneg) throw internal_error("dual_sup_form: K must live in the orthant");
    if ((int)phi_cols.size() != K.dim) throw internal_error("dual_sup_form: phi shape");
    const int m = (int)K.rows.size();
    HPolyhedron out;
    out.dim = outer_dim + m;
    out.lifted = m;
    out.nonneg = true;
    for (int j = 0; j < K.dim; ++j) {
        Row r{zeros(out.dim), Rat(0)};  // phi_j(outer) - (C^T u)_j <= 0
        for (int i = 0; i < outer_dim; ++i) r.a[i] = phi_cols[j][i];
        for (int k = 0; k < m; ++k) r.a[outer_dim + k] = -K.rows[k].a[j];
        out.rows.push_back(std::move(r));
    }
    Row budget{zeros(out.dim), Rat(1)};
    for (int k = 0; k < m; ++k) budget.a[outer_dim + k] = K.rows[k].b;
    out.rows.push_back(std::move(budget));
    return out;
}

namespace {

// Identity pairing: phi(mu) = mu.
std::vector<Vec> identity_phi(int dim) {
    std::vector<Vec> cols(dim, Vec());
    for (int j = 0; j < dim; ++j) {
        cols[j] = zeros(dim);
        cols[j][j] = 1;
    }
    return cols;
}

// Smallest closed convex solid superset of a finite point list in `dim`
// coordinates: the solid hull of the convex hull, via a simplex-weight lift.
HPolyhedron downset_hull_points(const std::vector<Vec>& pts, int dim) {
    const int k = (int)pts.size();
    if (k == 0) throw internal_error("downset_hull_points: empty list");
    HPolyhedron lift;
    lift.dim = dim + k;
    lift.lifted = k;
    lift.nonneg = true;
    Row le{zeros(lift.dim), Rat(1)}, ge{zeros(lift.dim), Rat(-1)};
    for (int j = 0; j < k; ++j) {
        le.a[dim + j] = 1;
        ge.a[dim + j] = -1;
    }
    lift.rows.push_back(le);
    lift.rows.push_back(ge);
    for (int i = 0; i < dim; ++i) {
        Row r{zeros(lift.dim), Rat(0)};
        r.a[i] = 1;
        for (int j = 0; j < k; ++j) r.a[dim + j] = -pts[j][i];
        lift.rows.push_back(std::move(r));
    }
    return resolved(lift);
}

// Per-model polar of the j_Q image in lifted H-form over (Z, u).
HPolyhedron feasible_z_poly(const RobustSet& s, const ProbabilityMeasure& q,
                            const std::vector<int>& positions) {
    const auto& priors = s.priors;
    const int zs = (int)positions.size();
    if (s.polyhedral()) {
        HPolyhedron K = member_poly(s);
        // phi_j(Z) = Q(atom_j) Z_k when j is the k-th support position, else 0.
        std::vector<Vec> phi(K.dim, Vec());
        for (int j = 0; j < K.dim; ++j) phi[j] = zeros(zs);
        for (int k = 0; k < zs; ++k) {
            int j = positions[k];
            phi[j][k] = q.weights[priors.nonpolar[j]];
        }
        return dual_sup_form(K, zs, phi);
    }
    HPolyhedron out = HPolyhedron::orthant(zs);
    for (const auto& g : s.points) {
        Row r{zeros(zs), Rat(1)};
        for (int k = 0; k < zs; ++k) r.a[k] = q.weights[priors.nonpolar[positions[k]]] * g[positions[k]];
        out.rows.push_back(std::move(r));
    }
    return normalize(out);
}

// The dual-route per-model bipolar over supp(Q) coordinates:
// {x >= 0 on supp(Q) : sup_{Z feasible} E_Q[Z x] <= 1}, resolved. The
// feasible-Z set stays in its lifted presentation; only its density block
// carries pairing weight.
HPolyhedron dual_model_bipolar(const RobustSet& s, const ProbabilityMeasure& q,
                               const std::vector<int>& positions) {
    HPolyhedron feas = feasible_z_poly(s, q, positions);
    const int zs = (int)positions.size();
    std::vector<Vec> phi(feas.dim, Vec());
    for (int j = 0; j < feas.dim; ++j) phi[j] = zeros(zs);
    for (int k = 0; k < zs; ++k) phi[k][k] = q.weights[s.priors.nonpolar[positions[k]]];
    return resolved(dual_sup_form(feas, zs, phi));
}

// The structural per-model bipolar: smallest closed convex solid superset of
// the j_Q image.
HPolyhedron structural_model_bipolar(const RobustSet& s, const ProbabilityMeasure& q,
                                     const std::vector<int>& positions) {
    JQImage img = image_jQ(s, q);
    if (img.poly) return solid_downset(*img.poly);
    return downset_hull_points(img.points, (int)positions.size());
}

void check_qset(const PriorSet& priors, const std::vector<ProbabilityMeasure>& qset,
                const char* op) {
    if (qset.empty()) throw input_error(std::string(op) + ": empty reduction set");
    for (const auto& q : qset) {
        if (!is_dominated(q.as_measure(), priors))
            throw input_error(std::string(op) + ": reduction measure charges a polar atom");
    }
}

}  // namespace

bool robust_set_equal(const RobustSet& a, const RobustSet& b) {
    if (a.polyhedral() && b.polyhedral()) return set_equal(*a.poly, *b.poly);
    if (!a.polyhedral() && !b.polyhedral()) return a.points == b.points;
    const RobustSet& gen = a.polyhedral() ? b : a;
    const RobustSet& pol = a.polyhedral() ? a : b;
    bool pol_empty = is_empty(*pol.poly);
    if (gen.points.empty() || pol_empty) return gen.points.empty() && pol_empty;
    // A convex member set is finite only when it is a single point, so the
    // two presentations agree exactly when both describe one common point
    // and the polyhedron has no recession direction.
    if (gen.points.size() != 1) return false;
    auto verts = vertex_enumerate(*pol.poly);
    if (verts.size() != 1 || verts[0] != gen.points[0]) return false;
    HPolyhedron mp = member_poly(pol);
    for (int i = 0; i < mp.dim; ++i) {
        Vec obj = zeros(mp.dim);
        obj[i] = 1;
        if (lp_optimize(obj, mp, Sense::maximize).status != LpStatus::optimal) return false;
    }
    return true;
}

CaPolar polar_ca(const RobustSet& s) {
    require_nonempty(s, "polar_ca");
    const int q = s.qdim();
    if (s.polyhedral()) {
        HPolyhedron K = member_poly(s);
        return CaPolar{dual_sup_form(K, q, identity_phi(q))};
    }
    HPolyhedron out = HPolyhedron::orthant(q);
    for (const auto& g : s.points) {
        Row r{g, Rat(1)};
        out.rows.push_back(std::move(r));
    }
    return CaPolar{normalize(out)};
}

RobustSet bipolar_ca(const RobustSet& s) {
    require_nonempty(s, "bipolar_ca");
    RobustSet structural =
        s.polyhedral()
            ? make_poly_set(s.priors, solid_downset(member_poly(s)), SetOrigin::derived)
            : smallest_closed_convex_solid(s.priors, GeneratorSet{s.points});

    // Independent route: dualize the polar's resolved H-form once more.
    HPolyhedron polar = resolved(polar_ca(s).poly);
    HPolyhedron twice = dual_sup_form(polar, s.qdim(), identity_phi(s.qdim()));
    if (!set_equal(*structural.poly, twice))
        throw internal_error("bipolar_ca: hull and polar-of-polar routes disagree");
    return structural;
}

KsPolar polar_ks(const RobustSet& s, const std::vector<ProbabilityMeasure>& qset) {
    require_nonempty(s, "polar_ks");
    check_qset(s.priors, qset, "polar_ks");
    KsPolar out;
    for (const auto& q : qset) {
        auto positions = support_positions(s.priors, q);
        out.entries.push_back({q, positions, feasible_z_poly(s, q, positions)});
    }
    return out;
}

RobustSet bipolar_lifted(const RobustSet& s, const std::vector<ProbabilityMeasure>& qset) {
    require_nonempty(s, "bipolar_lifted");
    check_qset(s.priors, qset, "bipolar_lifted");

    std::optional<RobustSet> acc;
    for (const auto& q : qset) {
        auto positions = support_positions(s.priors, q);
        HPolyhedron d_q = structural_model_bipolar(s, q, positions);
        // Per-model re-verification against the dual description; equality
        // in supp(Q) coordinates makes the intersected cylinders equal too.
        if (!set_equal(d_q, dual_model_bipolar(s, q, positions)))
            throw internal_error("bipolar_lifted: structural and dual model bipolars disagree");
        RobustSet cyl = preimage_jQ(d_q, s.priors, q);
        acc = acc ? intersect_sets(*acc, cyl) : cyl;
    }

    // The construction must contain S.
    if (s.polyhedral()) {
        if (!contains(*acc->poly, *s.poly).contained)
            throw internal_error("bipolar_lifted: result does not contain the set");
    } else {
        for (const auto& g : s.points) {
            if (!set_member(*acc, g))
                throw internal_error("bipolar_lifted: result does not contain the set");
        }
    }
    return *acc;
}

RobustSet bipolar_diamond(const RobustSet& s, const std::vector<ProbabilityMeasure>& qset) {
    require_nonempty(s, "bipolar_diamond");
    check_qset(s.priors, qset, "bipolar_diamond");
    // On finite models every class is bounded, so the polar over all of
    // L0_{c+} coincides with the bounded-density polar and the bipolar is
    // the intersection of the dual-route model bipolars.
    std::optional<RobustSet> acc;
    for (const auto& q : qset) {
        auto positions = support_positions(s.priors, q);
        RobustSet cyl = preimage_jQ(dual_model_bipolar(s, q, positions), s.priors, q);
        acc = acc ? intersect_sets(*acc, cyl) : cyl;
    }
    return *acc;
}

RobustSet bipolar_star_disjoint(const RobustSet& s,
                                const std::vector<ProbabilityMeasure>& qset) {
    require_nonempty(s, "bipolar_star_disjoint");
    check_qset(s.priors, qset, "bipolar_star_disjoint");
    std::vector<std::vector<int>> supports;
    for (const auto& q : qset) supports.push_back(support_positions(s.priors, q));
    std::vector<int> hit(s.qdim(), 0);
    for (const auto& supp : supports) {
        for (int p : supp) {
            if (hit[p]++) throw input_error("bipolar_star_disjoint: supports overlap");
        }
    }

    const int q = s.qdim();
    // C*: densities Z >= 0 on all coordinates passing every model's test.
    HPolyhedron cstar = HPolyhedron::orthant(q);
    for (size_t qi = 0; qi < qset.size(); ++qi) {
        if (s.polyhedral()) {
            HPolyhedron K = member_poly(s);
            std::vector<Vec> phi(K.dim, Vec());
            for (int j = 0; j < K.dim; ++j) phi[j] = zeros(q);
            for (int p : supports[qi]) phi[p][p] = qset[qi].weights[s.priors.nonpolar[p]];
            HPolyhedron block = resolved(dual_sup_form(K, q, phi));
            for (auto& r : block.rows) cstar.rows.push_back(std::move(r));
        } else {
            for (const auto& g : s.points) {
                Row r{zeros(q), Rat(1)};
                for (int p : supports[qi]) r.a[p] = qset[qi].weights[s.priors.nonpolar[p]] * g[p];
                cstar.rows.push_back(std::move(r));
            }
        }
    }
    cstar = normalize(cstar);

    // C**: per model, sup over C* of E_Q[Z x] <= 1, intersected.
    std::optional<RobustSet> acc;
    for (size_t qi = 0; qi < qset.size(); ++qi) {
        std::vector<Vec> phi(q, Vec());
        for (int j = 0; j < q; ++j) phi[j] = zeros(q);
        for (int p : supports[qi]) phi[p][p] = qset[qi].weights[s.priors.nonpolar[p]];
        HPolyhedron block = dual_sup_form(cstar, q, phi);
        RobustSet piece = make_poly_set(s.priors, resolved(block), SetOrigin::derived);
        acc = acc ? intersect_sets(*acc, piece) : piece;
    }

    RobustSet lifted = bipolar_lifted(s, qset);
    if (!set_equal(*acc->poly, *lifted.poly))
        throw internal_error("bipolar_star_disjoint: **-route disagrees with the lifting");
    return *acc;
}

RobustSet sensitive_smallest_superset(const RobustSet& s) {
    require_nonempty(s, "sensitive_smallest_superset");
    RobustSet b = bipolar_ca(s);

    // Minimality probes: every convex solid closed superset we can easily
    // manufacture must contain the bipolar.
    const int q = s.qdim();
    HPolyhedron sp = s.polyhedral() ? member_poly(s) : HPolyhedron();
    auto sup_of = [&](const Vec& obj) -> std::optional<Rat> {
        if (s.polyhedral()) {
            auto out = lp_optimize(obj, sp, Sense::maximize);
            if (out.status != LpStatus::optimal) return std::nullopt;
            return out.value;
        }
        std::optional<Rat> best;
        for (const auto& g : s.points) {
            Rat v = dot(obj, g);
            if (!best || v > *best) best = v;
        }
        return best;
    };

    std::vector<HPolyhedron> probes;
    probes.push_back(HPolyhedron::orthant(q));
    HPolyhedron box = HPolyhedron::orthant(q);
    bool box_ok = true;
    for (int i = 0; i < q && box_ok; ++i) {
        Vec obj = zeros(q);
        obj[i] = 1;
        auto m = sup_of(obj);
        if (!m) {
            box_ok = false;
            break;
        }
        Row r{zeros(q), *m};
        r.a[i] = 1;
        box.rows.push_back(std::move(r));
    }
    if (box_ok) probes.push_back(box);
    auto total = sup_of(Vec(q, Rat(1)));
    if (total) {
        HPolyhedron simplex = HPolyhedron::orthant(q);
        simplex.rows.push_back({Vec(q, Rat(1)), *total});
        probes.push_back(simplex);
    }
    for (const auto& d : probes) {
        if (!contains(d, *b.poly).contained)
            throw internal_error("sensitive_smallest_superset: minimality probe failed");
    }
    return b;
}

BipolarReport check_bipolar_theorem(const RobustSet& s,
                                    const std::vector<ProbabilityMeasure>& qset) {
    require_nonempty(s, "check_bipolar_theorem");
    check_qset(s.priors, qset, "check_bipolar_theorem");

    BipolarReport rep;
    rep.properties.convex = is_convex(s);
    rep.properties.solid = is_solid(s).solid;
    rep.properties.closed = is_closed_all_notions(s, qset).all_agree();
    rep.properties.sensitive = is_sensitive(s, qset).sensitive;

    RobustSet b = bipolar_lifted(s, qset);

    if (s.polyhedral()) {
        auto verdict = contains(*s.poly, *b.poly);
        rep.equal = verdict.contained;
        if (!rep.equal) {
            // Prefer the lexicographically smallest vertex of the bipolar
            // that escapes S; fall back to the containment witness.
            std::optional<Vec> w;
            for (const auto& v : vertex_enumerate(*b.poly)) {
                if (!set_member(s, v)) {
                    w = v;
                    break;
                }
            }
            rep.witness = w ? *w : *verdict.witness;
        }
    } else {
        rep.equal = robust_set_equal(s, b);
        if (!rep.equal) {
            // Candidates in a deterministic order: pairwise midpoints of the
            // generators, then bipolar vertices, then halvings of
            // generators; the first one inside the bipolar but outside S.
            std::vector<Vec> candidates;
            for (size_t i = 0; i < s.points.size(); ++i) {
                for (size_t j = i + 1; j < s.points.size(); ++j) {
                    Vec mid(s.points[i].size());
                    for (size_t k = 0; k < mid.size(); ++k)
                        mid[k] = (s.points[i][k] + s.points[j][k]) / 2;
                    candidates.push_back(std::move(mid));
                }
            }
            std::sort(candidates.begin(), candidates.end(), lex_less);
            for (const auto& v : vertex_enumerate(*b.poly)) candidates.push_back(v);
            for (const auto& g : s.points) {
                Vec h = g;
                for (auto& c : h) c /= 2;
                candidates.push_back(std::move(h));
            }
            for (const auto& c : candidates) {
                if (set_member(b, c) && !set_member(s, c)) {
                    rep.witness = c;
                    break;
                }
            }
        }
    }

    if (rep.witness) {
        if (!set_member(b, *rep.witness) || set_member(s, *rep.witness))
            throw internal_error("bipolar witness failed re-verification");
    }
    if (rep.equal != rep.properties.all())
        throw internal_error(
            "bipolar theorem violated: equality and the four properties disagree");
    return rep;
}

std::optional<Vec> refute_membership(const RobustSet& s, const Vec& x) {
    require_nonempty(s, "refute_membership");
    RobustSet b = bipolar_ca(s);
    if (set_member(b, x)) return std::nullopt;

    HPolyhedron polar = polar_ca(s).poly;
    Vec obj = x;
    obj.resize(polar.dim, Rat(0));
    LpOutcome out = lp_optimize(obj, polar, Sense::maximize);
    Vec mu;
    if (out.status == LpStatus::optimal) {
        mu = out.point;
    } else if (out.status == LpStatus::unbounded) {
        mu = out.point;
        Rat have = dot(obj, out.point);
        Rat t = (Rat(1) - have) / dot(obj, out.ray) + 1;
        for (int i = 0; i < polar.dim; ++i) mu[i] += t * out.ray[i];
    } else {
        throw internal_error("refute_membership: polar is empty");
    }
    mu.resize(s.qdim());

    // Certificate soundness: <mu, x> > 1 and sup over S at most 1.
    if (dot(mu, x) <= 1) throw internal_error("refute_membership: certificate too weak");
    if (s.polyhedral()) {
        auto sup = lp_optimize(mu, member_poly(s), Sense::maximize);
        if (sup.status != LpStatus::optimal || sup.value > 1)
            throw internal_error("refute_membership: certificate exceeds 1 on S");
    } else {
        for (const auto& g : s.points) {
            if (dot(mu, g) > 1)
                throw internal_error("refute_membership: certificate exceeds 1 on S");
        }
    }
    return mu;
}

}  // namespace rbp
