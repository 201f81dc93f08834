#include "rbp/transport.hpp"

#include <algorithm>

#include "rbp/simplex.hpp"

namespace rbp {

namespace {

std::vector<std::string> product_labels(const FiniteSpace& s1, const FiniteSpace& s2) {
    std::vector<std::string> labels;
    for (const auto& a : s1.atoms)
        for (const auto& b : s2.atoms) labels.push_back(a + "|" + b);
    return labels;
}

ProductModel assemble(const PriorSet& p1, const PriorSet& p2,
                      std::vector<ProbabilityMeasure> gens) {
    FiniteSpace space(product_labels(p1.space, p2.space));
    PriorSet product(space, std::move(gens));

    // Product polar structure must be exactly the pairs of non-polar atoms.
    const int n2 = p2.space.n();
    for (int a = 0; a < p1.space.n(); ++a) {
        for (int b = 0; b < n2; ++b) {
            bool np = !p1.atom_polar(a) && !p2.atom_polar(b);
            if (np == product.atom_polar(a * n2 + b))
                throw input_error("coupling priors do not match the product polar structure");
        }
    }

    ProductModel model{p1, p2, product, {}};
    for (int atom : model.product.nonpolar) {
        int a = atom / n2, b = atom % n2;
        int i = -1, j = -1;
        for (int k = 0; k < p1.qdim(); ++k)
            if (p1.nonpolar[k] == a) i = k;
        for (int k = 0; k < p2.qdim(); ++k)
            if (p2.nonpolar[k] == b) j = k;
        model.factor_positions.emplace_back(i, j);
    }
    return model;
}

}  // namespace

ProductModel make_product_model(const PriorSet& p1, const PriorSet& p2) {
    std::vector<ProbabilityMeasure> gens;
    const int n2 = p2.space.n();
    for (const auto& g1 : p1.generators) {
        for (const auto& g2 : p2.generators) {
            Vec w(p1.space.n() * n2, Rat(0));
            for (int a = 0; a < p1.space.n(); ++a)
                for (int b = 0; b < n2; ++b) w[a * n2 + b] = g1.weights[a] * g2.weights[b];
            gens.emplace_back(std::move(w));
        }
    }
    return assemble(p1, p2, std::move(gens));
}

ProductModel make_product_model(const PriorSet& p1, const PriorSet& p2,
                                std::vector<ProbabilityMeasure> couplings) {
    return assemble(p1, p2, std::move(couplings));
}

MarginalSystem make_marginal_system(const RobustSet& c1, const RobustSet& c2) {
    if (set_is_empty(c1) || set_is_empty(c2))
        throw input_error("marginal system needs non-empty defining sets");
    // Canonicalize so that C_i equals its own bipolar; the polar is
    // unchanged by this.
    MarginalSystem sys{bipolar_ca(c1), bipolar_ca(c2), {}, {}};
    // Minimal presentations: the marginal polars seed every later row count.
    sys.m1 = remove_redundant_rows(resolved(polar_ca(sys.c1).poly));
    sys.m2 = remove_redundant_rows(resolved(polar_ca(sys.c2).poly));
    if (!member(sys.m1, zeros(sys.m1.dim)) || !member(sys.m2, zeros(sys.m2.dim)))
        throw internal_error("marginal polar lost the zero measure");
    return sys;
}

namespace {

// Rows of the product-measure feasibility set {mu >= 0 : marginals in M_i},
// over the product quotient coordinates.
HPolyhedron product_measure_poly(const ProductModel& model, const MarginalSystem& sys) {
    const int pq = model.product.qdim();
    HPolyhedron poly = HPolyhedron::orthant(pq);
    for (const auto& r : sys.m1.rows) {
        Row nr{zeros(pq), r.b};
        for (int pos = 0; pos < pq; ++pos) nr.a[pos] = r.a[model.factor_positions[pos].first];
        poly.rows.push_back(std::move(nr));
    }
    for (const auto& r : sys.m2.rows) {
        Row nr{zeros(pq), r.b};
        for (int pos = 0; pos < pq; ++pos) nr.a[pos] = r.a[model.factor_positions[pos].second];
        poly.rows.push_back(std::move(nr));
    }
    // This polytope gets vertex-enumerated; keep its presentation minimal.
    return remove_redundant_rows(poly);
}

// Variables (X1, X2, u1, u2, s1, s2), all nonnegative: the dual feasibility
// block. Returns the polyhedron and the offsets of the blocks.
struct DualBlock {
    HPolyhedron poly;
    int off_x1, off_x2, off_u1, off_u2, off_s1, off_s2;
};

DualBlock dual_feasibility(const Vec& x, const ProductModel& model, const MarginalSystem& sys,
                           bool with_s) {
    const int q1 = model.p1.qdim(), q2 = model.p2.qdim();
    const int m1 = (int)sys.m1.rows.size(), m2 = (int)sys.m2.rows.size();
    DualBlock blk;
    blk.off_x1 = 0;
    blk.off_x2 = q1;
    blk.off_u1 = q1 + q2;
    blk.off_u2 = q1 + q2 + m1;
    blk.off_s1 = q1 + q2 + m1 + m2;
    blk.off_s2 = blk.off_s1 + 1;
    HPolyhedron& poly = blk.poly;
    poly.dim = q1 + q2 + m1 + m2 + (with_s ? 2 : 0);
    poly.nonneg = true;

    // Cover: X(i,j) <= X1_i + X2_j on every non-polar product atom.
    for (int pos = 0; pos < model.product.qdim(); ++pos) {
        auto [i, j] = model.factor_positions[pos];
        Row r{zeros(poly.dim), -x[pos]};
        r.a[blk.off_x1 + i] = -1;
        r.a[blk.off_x2 + j] = -1;
        poly.rows.push_back(std::move(r));
    }
    // Support-function epigraphs via LP duality of sup over M_i.
    for (int i = 0; i < q1; ++i) {
        Row r{zeros(poly.dim), Rat(0)};  // X1_i - (M1^T u1)_i <= 0
        r.a[blk.off_x1 + i] = 1;
        for (int k = 0; k < m1; ++k) r.a[blk.off_u1 + k] = -sys.m1.rows[k].a[i];
        poly.rows.push_back(std::move(r));
    }
    for (int j = 0; j < q2; ++j) {
        Row r{zeros(poly.dim), Rat(0)};
        r.a[blk.off_x2 + j] = 1;
        for (int k = 0; k < m2; ++k) r.a[blk.off_u2 + k] = -sys.m2.rows[k].a[j];
        poly.rows.push_back(std::move(r));
    }
    if (with_s) {
        Row r1{zeros(poly.dim), Rat(0)};  // <d1,u1> <= s1
        for (int k = 0; k < m1; ++k) r1.a[blk.off_u1 + k] = sys.m1.rows[k].b;
        r1.a[blk.off_s1] = -1;
        poly.rows.push_back(std::move(r1));
        Row r2{zeros(poly.dim), Rat(0)};
        for (int k = 0; k < m2; ++k) r2.a[blk.off_u2 + k] = sys.m2.rows[k].b;
        r2.a[blk.off_s2] = -1;
        poly.rows.push_back(std::move(r2));
    }
    return blk;
}

}  // namespace

PrimalSolution relaxed_primal(const Vec& x, const ProductModel& model,
                              const MarginalSystem& sys) {
    if ((int)x.size() != model.product.qdim())
        throw input_error("relaxed_primal: goal vector has wrong dimension");
    for (const auto& c : x)
        if (c < 0) throw input_error("relaxed_primal: goal vector must be non-negative");
    HPolyhedron poly = product_measure_poly(model, sys);
    auto out = lp_optimize(x, poly, Sense::maximize);
    if (out.status == LpStatus::infeasible)
        throw internal_error("relaxed_primal: feasible set lost the zero measure");
    if (out.status == LpStatus::unbounded)
        throw input_error("relaxed_primal: problem is not well-posed (unbounded value)");
    return {out.value, out.point};
}

DualSolution dual_min(const Vec& x, const ProductModel& model, const MarginalSystem& sys) {
    if ((int)x.size() != model.product.qdim())
        throw input_error("dual_min: goal vector has wrong dimension");
    DualBlock blk = dual_feasibility(x, model, sys, true);
    Vec obj = zeros(blk.poly.dim);
    obj[blk.off_s1] = 1;
    obj[blk.off_s2] = 1;
    auto out = lp_optimize(obj, blk.poly, Sense::minimize);
    if (out.status != LpStatus::optimal)
        throw input_error("dual_min: no admissible splitting with finite value");
    DualSolution sol;
    sol.value = out.value;
    sol.x1 = Vec(out.point.begin() + blk.off_x1, out.point.begin() + blk.off_x1 + model.p1.qdim());
    sol.x2 = Vec(out.point.begin() + blk.off_x2, out.point.begin() + blk.off_x2 + model.p2.qdim());
    return sol;
}

namespace {

// The splittable-at-cost-1 set C in lifted H-form over
// (Y, X1, X2, u1, u2): cover rows, support-function dual rows, and the
// budget <d1,u1> + <d2,u2> <= 1. Never resolved: every check against it
// runs as an LP on the lift.
HPolyhedron splittable_set_lift(const ProductModel& model, const MarginalSystem& sys) {
    const int pq = model.product.qdim();
    DualBlock blk = dual_feasibility(zeros(pq), model, sys, false);
    HPolyhedron c_lift;
    c_lift.dim = pq + blk.poly.dim;
    c_lift.lifted = blk.poly.dim;
    c_lift.nonneg = true;
    for (const auto& r : blk.poly.rows) {
        Row nr{zeros(c_lift.dim), r.b};
        for (int k = 0; k < blk.poly.dim; ++k) nr.a[pq + k] = r.a[k];
        c_lift.rows.push_back(std::move(nr));
    }
    // The first pq block rows are the covers; wire in the goal coordinate.
    for (int pos = 0; pos < pq; ++pos) {
        c_lift.rows[pos].a[pos] = 1;
        c_lift.rows[pos].b = Rat(0);
    }
    Row budget{zeros(c_lift.dim), Rat(1)};
    for (int k = 0; k < (int)sys.m1.rows.size(); ++k)
        budget.a[pq + blk.off_u1 + k] = sys.m1.rows[k].b;
    for (int k = 0; k < (int)sys.m2.rows.size(); ++k)
        budget.a[pq + blk.off_u2 + k] = sys.m2.rows[k].b;
    c_lift.rows.push_back(std::move(budget));
    return c_lift;
}

// sup of <mu, Y> over a (possibly lifted) set, as status plus value.
std::pair<bool, Rat> sup_over(const HPolyhedron& set, const Vec& mu) {
    Vec obj = mu;
    obj.resize(set.dim, Rat(0));
    auto out = lp_optimize(obj, set, Sense::maximize);
    if (out.status == LpStatus::infeasible) throw internal_error("sup over an empty set");
    if (out.status == LpStatus::unbounded) return {false, Rat(0)};
    return {true, out.value};
}

}  // namespace

TransportReport check_no_gap(const Vec& x, const ProductModel& model,
                             const MarginalSystem& sys) {
    TransportReport rep;
    PrimalSolution primal = relaxed_primal(x, model, sys);
    DualSolution dual = dual_min(x, model, sys);
    rep.primal_value = primal.value;
    rep.dual_value = dual.value;
    rep.optimal_mu = primal.mu;
    rep.optimal_x1 = dual.x1;
    rep.optimal_x2 = dual.x2;
    rep.degenerate = (primal.value == 0);

    if (rep.dual_value < rep.primal_value)
        throw internal_error("weak duality violated");
    rep.gap_zero = (rep.primal_value == rep.dual_value);
    if (!rep.gap_zero) throw internal_error("finite transport LP left a duality gap");

    // The admissible product measures in V-description.
    const int pq = model.product.qdim();
    HPolyhedron mprod = product_measure_poly(model, sys);
    std::vector<Vec> m_verts = vertex_enumerate(mprod);
    std::vector<Vec> m_rays = recession_rays(mprod);

    // D = polar of M, written directly from the V-description.
    HPolyhedron d_res = HPolyhedron::orthant(pq);
    for (const auto& v : m_verts) d_res.rows.push_back({v, Rat(1)});
    for (const auto& r : m_rays) d_res.rows.push_back({r, Rat(0)});
    d_res = normalize(d_res);

    HPolyhedron c_lift = splittable_set_lift(model, sys);

    // C inside D, which is also M inside polar(C): the support function of C
    // stays at most 1 on the vertices of M and at most 0 on its rays.
    for (const auto& v : m_verts) {
        auto [fin, val] = sup_over(c_lift, v);
        if (!fin || val > 1) throw internal_error("transport: C escaped D");
    }
    for (const auto& r : m_rays) {
        auto [fin, val] = sup_over(c_lift, r);
        if (!fin || val > 0) throw internal_error("transport: C escaped D");
    }

    // D inside C: every vertex and extreme ray of D belongs to C. On
    // products too large to enumerate, the equality instead rests on the
    // exact polar identity below (D is the polar of M by construction, and
    // M is verified to be the polar of C, so D is the measure bipolar of C)
    // together with the extreme points of D picked out by a deterministic
    // objective family, each verified against the lift.
    HPolyhedron c_hom = homogenized(c_lift);
    auto point_in_c = [&](const Vec& y) {
        if (!member(c_lift, y)) throw internal_error("transport: C and D differ");
    };
    auto ray_in_c = [&](const Vec& s) {
        if (!member(c_hom, s)) throw internal_error("transport: C and D differ");
    };
    try {
        for (const auto& y : vertex_enumerate(d_res)) point_in_c(y);
        for (const auto& s : recession_rays(d_res)) ray_in_c(s);
    } catch (const input_error&) {
        std::vector<Vec> objectives;
        for (int i = 0; i < pq; ++i) {
            Vec e = zeros(pq);
            e[i] = 1;
            objectives.push_back(std::move(e));
        }
        objectives.push_back(Vec(pq, Rat(1)));
        for (int i = 0; i < pq; ++i) {
            Vec alt(pq);
            for (int j = 0; j < pq; ++j) alt[j] = make_rat(1 + (i + j) % 3);
            objectives.push_back(std::move(alt));
        }
        for (const auto& obj : objectives) {
            auto out = lp_optimize(obj, d_res, Sense::maximize);
            if (out.status == LpStatus::unbounded) {
                point_in_c(out.point);
                ray_in_c(out.ray);
            } else if (out.status == LpStatus::optimal) {
                point_in_c(out.point);
            }
        }
    }
    rep.c_equals_d = true;

    // polar(C) = M = polar(D). The "M inside" halves are the support
    // conditions above (for C) and their D analogues; the reverse halves run
    // the rows of M against the lifted dual forms.
    for (const auto& v : m_verts) {
        auto [fin, val] = sup_over(d_res, v);
        if (!fin || val > 1) throw internal_error("transport: M escaped polar(D)");
    }
    for (const auto& r : m_rays) {
        auto [fin, val] = sup_over(d_res, r);
        if (!fin || val > 0) throw internal_error("transport: M escaped polar(D)");
    }
    auto polar_inside_m = [&](const HPolyhedron& set) {
        std::vector<Vec> phi(set.dim, Vec());
        for (int j = 0; j < set.dim; ++j) phi[j] = zeros(pq);
        for (int j = 0; j < pq; ++j) phi[j][j] = 1;
        HPolyhedron polar_lift = dual_sup_form(set, pq, phi);
        return contains(mprod, polar_lift).contained;
    };
    rep.polar_identity = polar_inside_m(c_lift) && polar_inside_m(d_res);
    if (!rep.polar_identity) throw internal_error("transport: polar identity failed");
    return rep;
}

MarginalPolarReport marginal_polar_identity(const ProductModel& model,
                                            const MarginalSystem& sys) {
    // Probe measures: vertices of the scaled total-mass simplexes over the
    // product atoms.
    const int pq = model.product.qdim();
    std::vector<Vec> probes;
    probes.push_back(zeros(pq));
    for (int s = 1; s <= 2; ++s) {
        for (int pos = 0; pos < pq; ++pos) {
            Vec mu = zeros(pq);
            mu[pos] = s;
            probes.push_back(std::move(mu));
        }
    }

    HPolyhedron c_lift = splittable_set_lift(model, sys);
    HPolyhedron c1 = member_poly(sys.c1), c2 = member_poly(sys.c2);

    MarginalPolarReport rep;
    for (const auto& mu : probes) {
        // Marginals of the probe.
        Vec mu1 = zeros(model.p1.qdim()), mu2 = zeros(model.p2.qdim());
        for (int pos = 0; pos < pq; ++pos) {
            mu1[model.factor_positions[pos].first] += mu[pos];
            mu2[model.factor_positions[pos].second] += mu[pos];
        }
        auto lhs = sup_over(c_lift, mu);
        auto r1 = lp_optimize(mu1, c1, Sense::maximize);
        auto r2 = lp_optimize(mu2, c2, Sense::maximize);
        bool rhs_fin = r1.status == LpStatus::optimal && r2.status == LpStatus::optimal;
        bool ok;
        if (lhs.first && rhs_fin) {
            Rat rhs = std::max(r1.value, r2.value);
            ok = (lhs.second == rhs);
        } else {
            ok = (!lhs.first && !rhs_fin);
        }
        if (!ok) throw internal_error("marginal polar identity failed on a probe");
        ++rep.probes;
    }
    rep.holds = true;
    return rep;
}

}  // namespace rbp
