#include "rbp/simplex.hpp"

#include <algorithm>

namespace rbp {

namespace {

// Dense tableau for the standard-form problem
//   max <c, z>  s.t.  M z <= rhs,  z >= 0,
// after free coordinates (nonneg == false) have been split z = u - v.
// Columns: structural 0..nv-1, slacks nv..nv+m-1, artificial nv+m (phase 1).
struct Tableau {
    int m = 0;
    int ncols = 0;
    std::vector<Vec> T;  // m rows, ncols entries each
    Vec rhs;
    std::vector<int> basis;

    void pivot(int row, int col) {
        Rat piv = T[row][col];
        for (int j = 0; j < ncols; ++j) T[row][j] /= piv;
        rhs[row] /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == row || T[i][col] == 0) continue;
            Rat f = T[i][col];
            for (int j = 0; j < ncols; ++j) T[i][j] -= f * T[row][j];
            rhs[i] -= f * rhs[row];
        }
        basis[row] = col;
    }

    // Reduced cost of column j for cost vector c (indexed by column).
    Rat reduced_cost(const Vec& c, int j) const {
        Rat r = c[j];
        for (int i = 0; i < m; ++i) {
            if (c[basis[i]] != 0) r -= c[basis[i]] * T[i][j];
        }
        return r;
    }

    Rat objective_value(const Vec& c) const {
        Rat v(0);
        for (int i = 0; i < m; ++i)
            if (c[basis[i]] != 0) v += c[basis[i]] * rhs[i];
        return v;
    }
};

enum class PhaseResult { optimal, unbounded };

// Bland's rule: entering column = lowest index with positive reduced cost,
// leaving row = lowest basic index among minimum ratios. Terminates without
// cycling and is fully deterministic.
PhaseResult run_simplex(Tableau& tab, const Vec& cost, const std::vector<bool>& usable,
                        int* unbounded_col) {
    for (;;) {
        int enter = -1;
        for (int j = 0; j < tab.ncols; ++j) {
            if (!usable[j]) continue;
            if (tab.reduced_cost(cost, j) > 0) {
                enter = j;
                break;
            }
        }
        if (enter < 0) return PhaseResult::optimal;

        int leave = -1;
        Rat best_ratio(0);
        for (int i = 0; i < tab.m; ++i) {
            if (tab.T[i][enter] <= 0) continue;
            Rat ratio = tab.rhs[i] / tab.T[i][enter];
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio && tab.basis[i] < tab.basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) {
            *unbounded_col = enter;
            return PhaseResult::unbounded;
        }
        tab.pivot(leave, enter);
    }
}

void verify_point_feasible(const HPolyhedron& poly, const Vec& x) {
    if ((int)x.size() != poly.dim) throw internal_error("lp: point has wrong dimension");
    if (poly.nonneg) {
        for (const auto& xi : x)
            if (xi < 0) throw internal_error("lp: point violates nonnegativity");
    }
    for (const auto& row : poly.rows) {
        if (dot(row.a, x) > row.b) throw internal_error("lp: point violates a constraint");
    }
}

void verify_ray(const HPolyhedron& poly, const Vec& obj, const Vec& d, bool maximizing) {
    Rat gain = dot(obj, d);
    if (maximizing ? gain <= 0 : gain >= 0) throw internal_error("lp: ray does not improve");
    if (poly.nonneg) {
        for (const auto& di : d)
            if (di < 0) throw internal_error("lp: ray leaves the orthant");
    }
    for (const auto& row : poly.rows) {
        if (dot(row.a, d) > 0) throw internal_error("lp: ray is not a recession direction");
    }
}

void verify_farkas(const HPolyhedron& poly, const Vec& lambda) {
    if (lambda.size() != poly.rows.size()) throw internal_error("lp: farkas size mismatch");
    Rat lb(0);
    for (size_t i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < 0) throw internal_error("lp: negative farkas multiplier");
        lb += lambda[i] * poly.rows[i].b;
    }
    if (lb >= 0) throw internal_error("lp: farkas combination not contradictory");
    for (int j = 0; j < poly.dim; ++j) {
        Rat w(0);
        for (size_t i = 0; i < lambda.size(); ++i) w += lambda[i] * poly.rows[i].a[j];
        if (poly.nonneg ? (w < 0) : (w != 0))
            throw internal_error("lp: farkas combination not valid");
    }
}

}  // namespace

LpOutcome lp_optimize(const Vec& objective, const HPolyhedron& poly, Sense sense) {
    const int n = poly.dim;
    if ((int)objective.size() != n) throw input_error("lp_optimize: objective dimension mismatch");
    const int m = (int)poly.rows.size();
    const bool maximizing = (sense == Sense::maximize);

    // Split free coordinates; under nonneg the structural block is x itself.
    const int nv = poly.nonneg ? n : 2 * n;
    auto to_x = [&](const Vec& z) {
        Vec x(n, Rat(0));
        for (int i = 0; i < n; ++i) x[i] = poly.nonneg ? z[i] : z[2 * i] - z[2 * i + 1];
        return x;
    };

    Vec cost(nv + m + 1, Rat(0));
    for (int i = 0; i < n; ++i) {
        Rat ci = maximizing ? objective[i] : -objective[i];
        if (poly.nonneg) {
            cost[i] = ci;
        } else {
            cost[2 * i] = ci;
            cost[2 * i + 1] = -ci;
        }
    }

    Tableau tab;
    tab.m = m;
    tab.ncols = nv + m + 1;
    tab.T.assign(m, Vec(tab.ncols, Rat(0)));
    tab.rhs.assign(m, Rat(0));
    tab.basis.assign(m, 0);
    const int art = nv + m;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            const Rat& a = poly.rows[i].a[j];
            if (a == 0) continue;
            if (poly.nonneg) {
                tab.T[i][j] = a;
            } else {
                tab.T[i][2 * j] = a;
                tab.T[i][2 * j + 1] = -a;
            }
        }
        tab.T[i][nv + i] = 1;
        tab.T[i][art] = -1;
        tab.rhs[i] = poly.rows[i].b;
        tab.basis[i] = nv + i;
    }

    std::vector<bool> usable(tab.ncols, true);
    usable[art] = false;

    // Phase 1: drive the single artificial to zero if some rhs is negative.
    int worst = -1;
    for (int i = 0; i < m; ++i) {
        if (tab.rhs[i] < 0 && (worst < 0 || tab.rhs[i] < tab.rhs[worst])) worst = i;
    }
    if (worst >= 0) {
        Vec cost1(tab.ncols, Rat(0));
        cost1[art] = -1;
        usable[art] = true;
        tab.pivot(worst, art);
        int dummy = -1;
        if (run_simplex(tab, cost1, usable, &dummy) != PhaseResult::optimal)
            throw internal_error("lp: phase 1 unbounded");
        if (tab.objective_value(cost1) < 0) {
            LpOutcome out;
            out.status = LpStatus::infeasible;
            out.farkas.assign(m, Rat(0));
            for (int i = 0; i < m; ++i) out.farkas[i] = -tab.reduced_cost(cost1, nv + i);
            verify_farkas(poly, out.farkas);
            return out;
        }
        // Feasible: remove the artificial from the basis if it lingers at zero.
        for (int i = 0; i < m; ++i) {
            if (tab.basis[i] != art) continue;
            int col = -1;
            for (int j = 0; j < nv + m; ++j) {
                if (tab.T[i][j] != 0) {
                    col = j;
                    break;
                }
            }
            if (col >= 0) tab.pivot(i, col);
            // An all-zero row is vacuous; leaving the artificial basic at
            // value zero is harmless since its column is disabled below.
        }
        usable[art] = false;
    }

    int unbounded_col = -1;
    PhaseResult res = run_simplex(tab, cost, usable, &unbounded_col);

    Vec z(tab.ncols, Rat(0));
    for (int i = 0; i < m; ++i) z[tab.basis[i]] = tab.rhs[i];

    LpOutcome out;
    out.point = to_x(Vec(z.begin(), z.begin() + nv));
    verify_point_feasible(poly, out.point);

    if (res == PhaseResult::optimal) {
        out.status = LpStatus::optimal;
        out.value = dot(objective, out.point);
        Rat tableau_value = tab.objective_value(cost);
        if ((maximizing ? out.value : -out.value) != tableau_value)
            throw internal_error("lp: objective value mismatch");
        return out;
    }

    // Unbounded: the entering column yields an improving recession ray.
    Vec dz(nv + m, Rat(0));
    dz[unbounded_col] = 1;
    for (int i = 0; i < m; ++i) {
        if (tab.basis[i] < nv + m) dz[tab.basis[i]] = -tab.T[i][unbounded_col];
    }
    out.status = LpStatus::unbounded;
    out.ray = to_x(Vec(dz.begin(), dz.begin() + nv));
    verify_ray(poly, objective, out.ray, maximizing);
    return out;
}

}  // namespace rbp
