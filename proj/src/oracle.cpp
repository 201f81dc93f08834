#include "rbp/oracle.hpp"

#include <algorithm>

namespace rbp {

namespace {

// Dictionary simplex for  max -x0  over  M y - x0 <= r, y >= 0, x0 >= 0,
// written independently of the main solver. Entering: Dantzig (largest
// reduced cost, lowest index on ties). Leaving: lexicographic ratio test on
// the full row, which makes the leaving choice unique and precludes cycling.
class FeasibilityDictionary {
  public:
    FeasibilityDictionary(const std::vector<Vec>& m_rows, const Vec& rhs) {
        m_ = (int)m_rows.size();
        n_ = m_ ? (int)m_rows[0].size() : 0;
        cols_ = n_ + m_ + 1;  // vars, slacks, artificial
        tab_.assign(m_, Vec(cols_ + 1, Rat(0)));
        basis_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < n_; ++j) tab_[i][j] = m_rows[i][j];
            tab_[i][n_ + i] = 1;
            tab_[i][n_ + m_] = -1;
            rhs_.push_back(rhs[i]);
            basis_[i] = n_ + i;
        }
    }

    bool feasible() {
        if (m_ == 0) return true;
        int worst = 0;
        for (int i = 1; i < m_; ++i)
            if (rhs_[i] < rhs_[worst]) worst = i;
        if (rhs_[worst] >= 0) return true;

        pivot(worst, n_ + m_);
        for (;;) {
            // Reduced costs for max -x0: the cost vector is -1 on the
            // artificial. Dantzig: strictly largest reduced cost, which
            // keeps the lowest column index on ties.
            int enter = -1;
            Rat best(0);
            for (int j = 0; j < cols_; ++j) {
                Rat rc = reduced_cost(j);
                if (rc > best) {
                    best = rc;
                    enter = j;
                }
            }
            if (enter < 0) break;
            int leave = lexicographic_leave(enter);
            if (leave < 0) return true;  // -x0 unbounded above cannot happen; defensive
            pivot(leave, enter);
        }
        // Optimal: feasible iff the artificial sits at zero.
        for (int i = 0; i < m_; ++i)
            if (basis_[i] == n_ + m_ && rhs_[i] != 0) return false;
        return true;
    }

  private:
    Rat cost(int col) const { return col == n_ + m_ ? Rat(-1) : Rat(0); }

    Rat reduced_cost(int j) const {
        Rat r = cost(j);
        for (int i = 0; i < m_; ++i) {
            Rat cb = cost(basis_[i]);
            if (cb != 0) r -= cb * tab_[i][j];
        }
        return r;
    }

    int lexicographic_leave(int enter) const {
        int best = -1;
        for (int i = 0; i < m_; ++i) {
            if (tab_[i][enter] <= 0) continue;
            if (best < 0) {
                best = i;
                continue;
            }
            if (lex_row_less(i, best, enter)) best = i;
        }
        return best;
    }

    // Compares rows i and k by (rhs, full row) / pivot entry lexicographically.
    bool lex_row_less(int i, int k, int enter) const {
        Rat ri = rhs_[i] / tab_[i][enter];
        Rat rk = rhs_[k] / tab_[k][enter];
        if (ri != rk) return ri < rk;
        for (int j = 0; j < cols_; ++j) {
            Rat a = tab_[i][j] / tab_[i][enter];
            Rat b = tab_[k][j] / tab_[k][enter];
            if (a != b) return a < b;
        }
        return false;
    }

    void pivot(int row, int col) {
        Rat p = tab_[row][col];
        for (auto& v : tab_[row]) v /= p;
        rhs_[row] /= p;
        for (int i = 0; i < m_; ++i) {
            if (i == row || tab_[i][col] == 0) continue;
            Rat f = tab_[i][col];
            for (int j = 0; j < cols_; ++j) tab_[i][j] -= f * tab_[row][j];
            rhs_[i] -= f * rhs_[row];
        }
        basis_[row] = col;
    }

    int m_ = 0, n_ = 0, cols_ = 0;
    std::vector<Vec> tab_;
    Vec rhs_;
    std::vector<int> basis_;
};

// All vectors of k nonnegative integers summing to total, in lexicographic
// order.
void compositions(int total, int k, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (k == 1) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= total; ++v) {
        cur.push_back(v);
        compositions(total - v, k - 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

bool oracle_feasible(const std::vector<Vec>& m_rows, const Vec& rhs) {
    if (m_rows.size() != rhs.size()) throw input_error("oracle_feasible: shape mismatch");
    FeasibilityDictionary dict(m_rows, rhs);
    return dict.feasible();
}

bool oracle_membership(const OracleSetDescription& desc, const Vec& x, int max_denominator) {
    const bool have_gen = !desc.generators.empty();
    const bool have_con = desc.constraints.has_value();
    if (have_gen == have_con)
        throw input_error("oracle_membership: exactly one description required");
    const int dim = (int)x.size();
    if (dim > 3) throw input_error("oracle_membership: only up to 3 coordinates supported");
    if (max_denominator < 1) throw input_error("oracle_membership: bad denominator bound");

    for (const auto& c : x)
        if (c < 0) return false;

    bool verdict;
    if (have_gen) {
        const int k = (int)desc.generators.size();
        // exists lambda >= 0: sum lambda = 1, G lambda >= x.
        std::vector<Vec> rows;
        Vec rhs;
        rows.push_back(Vec(k, Rat(1)));
        rhs.push_back(Rat(1));
        rows.push_back(Vec(k, Rat(-1)));
        rhs.push_back(Rat(-1));
        for (int i = 0; i < dim; ++i) {
            Vec r(k);
            for (int j = 0; j < k; ++j) {
                if ((int)desc.generators[j].size() != dim)
                    throw input_error("oracle_membership: generator dimension mismatch");
                r[j] = -desc.generators[j][i];
            }
            rows.push_back(std::move(r));
            rhs.push_back(-x[i]);
        }
        verdict = oracle_feasible(rows, rhs);

        // Grid confirmation: a convex combination on the 1/D grid dominating
        // x proves membership and must agree with the LP verdict.
        std::vector<std::vector<int>> weights;
        std::vector<int> cur;
        compositions(max_denominator, k, cur, weights);
        bool grid_hit = false;
        for (const auto& w : weights) {
            bool dominates = true;
            for (int i = 0; i < dim && dominates; ++i) {
                Rat combo(0);
                for (int j = 0; j < k; ++j)
                    combo += Rat(Int(w[j]), Int(max_denominator)) * desc.generators[j][i];
                dominates = combo >= x[i];
            }
            if (dominates) {
                grid_hit = true;
                break;
            }
        }
        if (grid_hit && !verdict)
            throw internal_error("oracle grid found a combination the LP denies");
    } else {
        // exists y: y in S, y >= x  (S already lives in the orthant).
        const HPolyhedron& s = *desc.constraints;
        if (s.lifted != 0) throw input_error("oracle_membership: description must be resolved");
        if (s.dim != dim) throw input_error("oracle_membership: dimension mismatch");
        std::vector<Vec> rows;
        Vec rhs;
        for (const auto& r : s.rows) {
            rows.push_back(r.a);
            rhs.push_back(r.b);
        }
        for (int i = 0; i < dim; ++i) {
            Vec r = zeros(dim);
            r[i] = -1;
            rows.push_back(std::move(r));
            rhs.push_back(-x[i]);
        }
        verdict = oracle_feasible(rows, rhs);
    }
    return verdict;
}

}  // namespace rbp
