#include "rbp/polyhedron.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "rbp/simplex.hpp"

namespace rbp {

namespace {

// Scales so the first nonzero coefficient becomes +-1. Rows with zero
// coefficient vector are reported via `trivial` (b >= 0) or left as the
// canonical infeasibility marker 0 <= -1.
Row scale_row(Row row, bool* zero_coeffs) {
    *zero_coeffs = true;
    for (const auto& c : row.a) {
        if (c != 0) {
            *zero_coeffs = false;
            Rat f = abs(c);
            for (auto& x : row.a) x /= f;
            row.b /= f;
            break;
        }
    }
    return row;
}

HPolyhedron canonical_empty(const HPolyhedron& like) {
    HPolyhedron out;
    out.dim = like.dim;
    out.lifted = like.lifted;
    out.nonneg = like.nonneg;
    out.rows.push_back({zeros(like.dim), make_rat(-1)});
    return out;
}

std::vector<Row> normalize_rows(std::vector<Row> rows, int dim, bool* infeasible_row) {
    *infeasible_row = false;
    std::vector<Row> scaled;
    scaled.reserve(rows.size());
    for (auto& r : rows) {
        if ((int)r.a.size() != dim) throw input_error("row dimension mismatch");
        bool zero = false;
        Row s = scale_row(std::move(r), &zero);
        if (zero) {
            if (s.b < 0) *infeasible_row = true;
            continue;  // 0 <= b with b >= 0 carries no information
        }
        scaled.push_back(std::move(s));
    }
    std::sort(scaled.begin(), scaled.end(), [](const Row& x, const Row& y) {
        if (x.a != y.a) return lex_less(x.a, y.a);
        return x.b < y.b;
    });
    // Identical normals: keep only the tightest offset.
    std::vector<Row> out;
    for (auto& r : scaled) {
        if (!out.empty() && out.back().a == r.a) continue;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

HPolyhedron normalize(const HPolyhedron& poly) {
    bool infeasible = false;
    auto rows = normalize_rows(poly.rows, poly.dim, &infeasible);
    if (infeasible) return canonical_empty(poly);
    HPolyhedron out = poly;
    out.rows = std::move(rows);
    return out;
}

HPolyhedron remove_redundant_rows(const HPolyhedron& poly) {
    HPolyhedron cur = normalize(poly);
    for (size_t i = 0; i < cur.rows.size();) {
        HPolyhedron rest = cur;
        rest.rows.erase(rest.rows.begin() + i);
        LpOutcome out = lp_optimize(cur.rows[i].a, rest, Sense::maximize);
        if (out.status == LpStatus::infeasible) return canonical_empty(poly);
        bool redundant = (out.status == LpStatus::optimal && out.value <= cur.rows[i].b);
        if (redundant)
            cur.rows.erase(cur.rows.begin() + i);
        else
            ++i;
    }
    return cur;
}

namespace {

// Exact redundancy prune of an intermediate elimination system. The rows are
// restricted to their live columns before each LP so the tableaus stay
// small, and the sign rows of the kept coordinates enter as context that is
// re-implied by the orthant flag afterwards.
std::vector<Row> prune_intermediate(std::vector<Row> rows, int dim, bool nonneg,
                                    const std::vector<bool>& drop, bool* infeasible) {
    std::vector<bool> alive(dim, false);
    for (const auto& r : rows)
        for (int c = 0; c < dim; ++c)
            if (r.a[c] != 0) alive[c] = true;
    std::vector<int> cols;
    for (int c = 0; c < dim; ++c)
        if (alive[c] || (!drop[c] && nonneg)) cols.push_back(c);

    HPolyhedron tmp;
    tmp.dim = (int)cols.size();
    tmp.nonneg = false;
    for (const auto& r : rows) {
        Row nr{Vec(), r.b};
        for (int c : cols) nr.a.push_back(r.a[c]);
        tmp.rows.push_back(std::move(nr));
    }
    if (nonneg) {
        for (size_t k = 0; k < cols.size(); ++k) {
            if (drop[cols[k]]) continue;  // pending sign rows are explicit already
            Row r{zeros(tmp.dim), Rat(0)};
            r.a[k] = -1;
            tmp.rows.push_back(std::move(r));
        }
    }
    tmp = remove_redundant_rows(tmp);

    std::vector<Row> out;
    for (const auto& r : tmp.rows) {
        Row nr{zeros(dim), r.b};
        for (size_t k = 0; k < cols.size(); ++k) nr.a[cols[k]] = r.a[k];
        out.push_back(std::move(nr));
    }
    return normalize_rows(std::move(out), dim, infeasible);
}

}  // namespace

HPolyhedron eliminate(const HPolyhedron& poly, const std::vector<int>& coords) {
    for (int c : coords)
        if (c < 0 || c >= poly.dim) throw input_error("eliminate: coordinate out of range");

    std::vector<bool> drop(poly.dim, false);
    for (int c : coords) drop[c] = true;

    std::vector<Row> rows = poly.rows;
    if (poly.nonneg) {
        for (int c = 0; c < poly.dim; ++c) {
            if (!drop[c]) continue;
            Row r{zeros(poly.dim), Rat(0)};
            r.a[c] = -1;
            rows.push_back(std::move(r));
        }
    }

    std::vector<int> pending;
    for (int c = 0; c < poly.dim; ++c)
        if (drop[c]) pending.push_back(c);

    bool infeasible = false;
    rows = normalize_rows(std::move(rows), poly.dim, &infeasible);

    while (!infeasible && !pending.empty()) {
        // Classic heuristic: eliminate the variable producing the fewest
        // pairwise combinations first; ties by coordinate index.
        size_t pick = 0;
        long best = -1;
        for (size_t k = 0; k < pending.size(); ++k) {
            long pos = 0, neg = 0;
            for (const auto& r : rows) {
                if (r.a[pending[k]] > 0) ++pos;
                if (r.a[pending[k]] < 0) ++neg;
            }
            long score = pos * neg;
            if (best < 0 || score < best) {
                best = score;
                pick = k;
            }
        }
        int v = pending[pick];
        pending.erase(pending.begin() + pick);

        std::vector<Row> zero, pos, neg;
        for (auto& r : rows) {
            if (r.a[v] == 0)
                zero.push_back(std::move(r));
            else if (r.a[v] > 0)
                pos.push_back(std::move(r));
            else
                neg.push_back(std::move(r));
        }
        std::vector<Row> next = std::move(zero);
        for (const auto& p : pos) {
            for (const auto& n : neg) {
                Rat fp = p.a[v], fn = -n.a[v];
                Row comb{zeros(poly.dim), p.b / fp + n.b / fn};
                for (int j = 0; j < poly.dim; ++j) comb.a[j] = p.a[j] / fp + n.a[j] / fn;
                next.push_back(std::move(comb));
            }
        }
        rows = normalize_rows(std::move(next), poly.dim, &infeasible);

        if (!infeasible && (int)rows.size() > kFullRedundancyThreshold)
            rows = prune_intermediate(std::move(rows), poly.dim, poly.nonneg, drop, &infeasible);
    }
    std::vector<Row> rows_final = std::move(rows);

    std::vector<int> keep;
    for (int c = 0; c < poly.dim; ++c)
        if (!drop[c]) keep.push_back(c);

    HPolyhedron out;
    out.dim = (int)keep.size();
    out.nonneg = poly.nonneg;
    int lifted_left = 0;
    for (int c = poly.dim - poly.lifted; c < poly.dim; ++c)
        if (!drop[c]) ++lifted_left;
    out.lifted = lifted_left;

    if (infeasible) return canonical_empty(out);

    for (const auto& r : rows_final) {
        Row nr{Vec(), r.b};
        nr.a.reserve(keep.size());
        for (int c : keep) nr.a.push_back(r.a[c]);
        for (int c = 0; c < poly.dim; ++c) {
            if (drop[c] && r.a[c] != 0) throw internal_error("eliminate: leftover coefficient");
        }
        out.rows.push_back(std::move(nr));
    }
    bool inf = false;
    out.rows = normalize_rows(std::move(out.rows), out.dim, &inf);
    if (inf) return canonical_empty(out);
    return out;
}

HPolyhedron resolved(const HPolyhedron& poly) {
    if (poly.lifted == 0) return normalize(poly);
    std::vector<int> coords;
    for (int c = poly.member_dim(); c < poly.dim; ++c) coords.push_back(c);
    return eliminate(poly, coords);
}

bool member(const HPolyhedron& poly, const Vec& x) {
    if ((int)x.size() != poly.member_dim()) throw input_error("member: dimension mismatch");
    if (poly.nonneg) {
        for (const auto& xi : x)
            if (xi < 0) return false;
    }
    if (poly.lifted == 0) {
        for (const auto& r : poly.rows)
            if (dot(r.a, x) > r.b) return false;
        return true;
    }
    // Small existential blocks are cheapest to eliminate outright; larger
    // ones go through a per-query feasibility LP.
    if (poly.lifted <= 3) return member(resolved(poly), x);

    HPolyhedron sub;
    sub.dim = poly.lifted;
    sub.nonneg = poly.nonneg;
    const int md = poly.member_dim();
    for (const auto& r : poly.rows) {
        Row nr{Vec(r.a.begin() + md, r.a.end()), r.b};
        for (int j = 0; j < md; ++j) nr.b -= r.a[j] * x[j];
        sub.rows.push_back(std::move(nr));
    }
    return !is_empty(sub);
}

bool is_empty(const HPolyhedron& poly) {
    if (poly.dim == 0) {
        for (const auto& r : poly.rows)
            if (r.b < 0) return true;
        return false;
    }
    return lp_optimize(zeros(poly.dim), poly, Sense::maximize).status == LpStatus::infeasible;
}

ContainmentVerdict contains(const HPolyhedron& A, const HPolyhedron& B) {
    HPolyhedron rA = resolved(A);
    if (rA.dim != B.member_dim()) throw input_error("contains: ambient dimension mismatch");
    if (is_empty(B)) return {true, std::nullopt};

    auto check_row = [&](const Vec& a, const Rat& b) -> std::optional<Vec> {
        Vec obj = a;
        obj.resize(B.dim, Rat(0));
        LpOutcome out = lp_optimize(obj, B, Sense::maximize);
        if (out.status == LpStatus::optimal && out.value <= b) return std::nullopt;
        Vec w = out.point;
        if (out.status == LpStatus::unbounded) {
            Rat have = dot(obj, out.point);
            if (have <= b) {
                Rat t = (b - have) / dot(obj, out.ray) + 1;
                for (int j = 0; j < B.dim; ++j) w[j] += t * out.ray[j];
            }
        }
        w.resize(B.member_dim());
        return w;
    };

    for (const auto& r : rA.rows) {
        if (auto w = check_row(r.a, r.b)) return {false, *w};
    }
    if (rA.nonneg && !B.nonneg) {
        for (int i = 0; i < rA.dim; ++i) {
            Vec a = zeros(rA.dim);
            a[i] = -1;
            if (auto w = check_row(a, Rat(0))) return {false, *w};
        }
    }
    return {true, std::nullopt};
}

bool set_equal(const HPolyhedron& A, const HPolyhedron& B) {
    return contains(A, B).contained && contains(B, A).contained;
}

HPolyhedron solid_downset(const HPolyhedron& poly) {
    if (!poly.nonneg) throw input_error("solid_downset: set must live in the orthant");
    const int md = poly.member_dim();
    HPolyhedron lift;
    lift.dim = md + poly.dim;
    lift.lifted = poly.dim;
    lift.nonneg = true;
    for (int i = 0; i < md; ++i) {
        Row r{zeros(lift.dim), Rat(0)};
        r.a[i] = 1;
        r.a[md + i] = -1;  // z_i <= y_i
        lift.rows.push_back(std::move(r));
    }
    for (const auto& r : poly.rows) {
        Row nr{zeros(lift.dim), r.b};
        for (int j = 0; j < poly.dim; ++j) nr.a[md + j] = r.a[j];
        lift.rows.push_back(std::move(nr));
    }
    return resolved(lift);
}

namespace {

// Exact Gauss-Jordan on [E | f]; returns pivot column per eliminated row.
// On return E is in reduced row echelon form.
std::vector<int> rref(std::vector<Vec>& E, Vec& f) {
    const int m = (int)E.size();
    const int n = m ? (int)E[0].size() : 0;
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int sel = -1;
        for (int i = row; i < m; ++i) {
            if (E[i][col] != 0) {
                sel = i;
                break;
            }
        }
        if (sel < 0) continue;
        std::swap(E[sel], E[row]);
        std::swap(f[sel], f[row]);
        Rat p = E[row][col];
        for (auto& x : E[row]) x /= p;
        f[row] /= p;
        for (int i = 0; i < m; ++i) {
            if (i == row || E[i][col] == 0) continue;
            Rat fac = E[i][col];
            for (int j = 0; j < n; ++j) E[i][j] -= fac * E[row][j];
            f[i] -= fac * f[row];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::vector<Vec> vertex_enumerate(const HPolyhedron& poly) {
    HPolyhedron P = resolved(poly);
    const int d = P.dim;
    if (d == 0) return is_empty(P) ? std::vector<Vec>{} : std::vector<Vec>{Vec{}};

    std::vector<Row> rows = P.rows;
    if (P.nonneg) {
        for (int i = 0; i < d; ++i) {
            Row r{zeros(d), Rat(0)};
            r.a[i] = -1;
            rows.push_back(std::move(r));
        }
    }

    // Pull paired rows (a,b) / (-a,-b) out as equalities to cut the
    // enumeration dimension; anything else stays an inequality.
    std::vector<Vec> E;
    Vec f;
    std::vector<Row> ineq;
    std::vector<bool> used(rows.size(), false);
    for (size_t i = 0; i < rows.size(); ++i) {
        if (used[i]) continue;
        bool paired = false;
        for (size_t j = i + 1; j < rows.size(); ++j) {
            if (used[j]) continue;
            bool neg = true;
            for (int k = 0; k < d && neg; ++k) neg = (rows[j].a[k] == -rows[i].a[k]);
            if (neg && rows[j].b == -rows[i].b) {
                E.push_back(rows[i].a);
                f.push_back(rows[i].b);
                used[i] = used[j] = true;
                paired = true;
                break;
            }
        }
        if (!paired) ineq.push_back(rows[i]);
    }

    // Parametrize the affine hull cut out by the equalities: x = p + N t.
    std::vector<int> pivots = rref(E, f);
    for (size_t i = pivots.size(); i < E.size(); ++i) {
        if (f[i] != 0) return {};  // inconsistent equalities
    }
    std::vector<bool> is_pivot(d, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < d; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    const int k = (int)free_cols.size();

    Vec p = zeros(d);
    for (size_t r = 0; r < pivots.size(); ++r) p[pivots[r]] = f[r];
    std::vector<Vec> N(d, zeros(k));
    for (int j = 0; j < k; ++j) {
        N[free_cols[j]][j] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) N[pivots[r]][j] = -E[r][free_cols[j]];
    }

    std::vector<Row> trows;
    for (const auto& r : ineq) {
        Row tr{zeros(k), r.b - dot(r.a, p)};
        for (int j = 0; j < k; ++j) {
            Rat c(0);
            for (int i = 0; i < d; ++i) c += r.a[i] * N[i][j];
            tr.a[j] = c;
        }
        trows.push_back(std::move(tr));
    }
    bool inf = false;
    trows = normalize_rows(std::move(trows), k, &inf);
    if (inf) return {};

    auto lift_back = [&](const Vec& t) {
        Vec x = p;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < k; ++j) x[i] += N[i][j] * t[j];
        return x;
    };

    std::vector<Vec> verts;
    if (k == 0) {
        Vec x = lift_back(Vec{});
        bool ok = true;
        for (const auto& r : ineq) ok = ok && dot(r.a, x) <= r.b;
        if (ok) verts.push_back(x);
        return verts;
    }

    const int nr = (int)trows.size();
    if (nr < k) return {};  // affine hull has no vertex

    double combos = 1;
    for (int i = 0; i < k; ++i) combos *= double(nr - i) / double(i + 1);
    if (combos > 2e5) throw input_error("vertex_enumerate: instance too large");

    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<Vec> found;
    for (;;) {
        std::vector<Vec> M(k, zeros(k));
        Vec rhs(k, Rat(0));
        for (int i = 0; i < k; ++i) {
            M[i] = trows[idx[i]].a;
            rhs[i] = trows[idx[i]].b;
        }
        auto piv = rref(M, rhs);
        if ((int)piv.size() == k) {
            Vec t(k, Rat(0));
            for (int i = 0; i < k; ++i) t[piv[i]] = rhs[i];
            bool ok = true;
            for (const auto& r : trows) ok = ok && dot(r.a, t) <= r.b;
            if (ok) found.push_back(lift_back(t));
        }
        int i = k - 1;
        while (i >= 0 && idx[i] == nr - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    std::sort(found.begin(), found.end(), lex_less);
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
}

HPolyhedron homogenized(const HPolyhedron& poly) {
    HPolyhedron out = poly;
    for (auto& r : out.rows) r.b = Rat(0);
    return out;
}

std::vector<Vec> recession_rays(const HPolyhedron& poly) {
    if (!poly.nonneg) throw input_error("recession_rays: member set must live in the orthant");
    if (is_empty(poly)) return {};
    HPolyhedron cone = resolved(homogenized(poly));
    // Slice the pointed cone at unit coordinate sum; the slice's vertices
    // are exactly the extreme rays.
    cone.rows.push_back({Vec(cone.dim, Rat(1)), Rat(1)});
    cone.rows.push_back({Vec(cone.dim, Rat(-1)), Rat(-1)});
    return vertex_enumerate(cone);
}

Vec lex_min_point(const HPolyhedron& poly) {
    HPolyhedron W = resolved(poly);
    if (is_empty(W)) throw input_error("lex_min_point: empty polyhedron");
    Vec out;
    for (int i = 0; i < W.dim; ++i) {
        Vec obj = zeros(W.dim);
        obj[i] = 1;
        LpOutcome lo = lp_optimize(obj, W, Sense::minimize);
        if (lo.status != LpStatus::optimal)
            throw input_error("lex_min_point: unbounded below in coordinate " + std::to_string(i));
        out.push_back(lo.value);
        Row pin{zeros(W.dim), lo.value};
        pin.a[i] = 1;
        W.rows.push_back(pin);
        pin.a[i] = -1;
        pin.b = -lo.value;
        W.rows.push_back(pin);
    }
    if (!member(resolved(poly), out)) throw internal_error("lex_min_point: result not a member");
    return out;
}

std::string dump(const HPolyhedron& poly) {
    std::string out;
    out += "dim=" + std::to_string(poly.dim) + " lifted=" + std::to_string(poly.lifted) +
           (poly.nonneg ? " x>=0\n" : "\n");
    for (const auto& r : poly.rows) out += vec_str(r.a) + " <= " + rat_str(r.b) + "\n";
    return out;
}

}  // namespace rbp
