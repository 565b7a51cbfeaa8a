// Dense, deterministic two-phase simplex with Bland's anti-cycling rule,
// plus a complementary-slackness certificate checker.
//
// The solver is deliberately small: problems here are at most a few dozen
// variables by ~1700 rows, and determinism and exact vertex/dual structure
// matter more than speed.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace polygon_chsh {

enum class VarSign { NonNegative, NonPositive, Free };
enum class Sense { Maximize, Minimize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LinearProgram {
    Sense sense = Sense::Maximize;
    std::vector<double> objective;          // c, one entry per variable
    std::vector<std::vector<double>> rows;  // A (inequality rows, A x <= b)
    std::vector<double> rhs;                // b
    std::vector<std::vector<double>> eq_rows;  // E (equality rows, E x = d)
    std::vector<double> eq_rhs;                // d
    std::vector<VarSign> sign;                 // per-variable; empty means all Free

    std::size_t num_vars() const { return objective.size(); }

    void add_row(std::vector<double> a, double b) {
        rows.push_back(std::move(a));
        rhs.push_back(b);
    }
    void add_eq(std::vector<double> e, double d) {
        eq_rows.push_back(std::move(e));
        eq_rhs.push_back(d);
    }
};

struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    double value = 0.0;
    std::vector<double> primal;   // x in the original variables
    std::vector<double> dual;     // y, one entry per inequality row
    std::vector<double> eq_dual;  // lambda, one entry per equality row
};

struct NumericBreakdown : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

// Result for the standard form: maximize c.x s.t. A x <= b, x >= 0.
struct StandardResult {
    LpStatus status = LpStatus::Optimal;
    double value = 0.0;
    std::vector<double> x;
    std::vector<double> y;  // duals, one per row; y >= 0 at optimum
};

class StandardSimplex {
public:
    StandardSimplex(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                    const std::vector<double>& c)
        : m_(A.size()), nv_(c.size()), c_(c), A_(A), b_(b) {
        negated_.assign(m_, false);
        int n_art = 0;
        for (std::size_t i = 0; i < m_; ++i)
            if (b[i] < 0) ++n_art;
        n_total_ = nv_ + m_ + static_cast<std::size_t>(n_art);
        tab_.assign(m_, std::vector<double>(n_total_ + 1, 0.0));
        basis_.assign(m_, -1);
        art_start_ = nv_ + m_;
        std::size_t next_art = art_start_;
        for (std::size_t i = 0; i < m_; ++i) {
            const double s = b[i] < 0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < nv_; ++j) tab_[i][j] = s * A[i][j];
            tab_[i][nv_ + i] = s;  // slack column (negated together with the row)
            tab_[i][n_total_] = s * b[i];
            if (b[i] < 0) {
                negated_[i] = true;
                tab_[i][next_art] = 1.0;
                basis_[i] = static_cast<int>(next_art++);
            } else {
                basis_[i] = static_cast<int>(nv_ + i);
            }
        }
    }

    StandardResult solve() {
        StandardResult res;
        // Phase 1: maximize -(sum of artificials).
        if (art_start_ < n_total_) {
            obj_.assign(n_total_ + 1, 0.0);
            for (std::size_t i = 0; i < m_; ++i) {
                if (static_cast<std::size_t>(basis_[i]) >= art_start_)
                    for (std::size_t j = 0; j <= n_total_; ++j) obj_[j] -= tab_[i][j];
            }
            for (std::size_t j = art_start_; j < n_total_; ++j) obj_[j] += 1.0;
            run(/*allow_artificial=*/false);
            if (obj_[n_total_] < -kFeasTol) {
                res.status = LpStatus::Infeasible;
                return res;
            }
            drive_out_artificials();
        }
        // Phase 2: the real objective.
        obj_.assign(n_total_ + 1, 0.0);
        for (std::size_t j = 0; j < nv_; ++j) obj_[j] = -c_[j];
        for (std::size_t i = 0; i < m_; ++i) {
            const int bj = basis_[i];
            if (bj >= 0 && static_cast<std::size_t>(bj) < nv_ && c_[bj] != 0.0)
                for (std::size_t j = 0; j <= n_total_; ++j) obj_[j] += c_[bj] * tab_[i][j];
        }
        // Clear reduced costs on basic columns (roundoff hygiene).
        for (std::size_t i = 0; i < m_; ++i) obj_[basis_[i]] = 0.0;
        if (!run(/*allow_artificial=*/false)) {
            res.status = LpStatus::Unbounded;
            return res;
        }
        res.status = LpStatus::Optimal;
        refactor(res);
        return res;
    }

private:
    // Bland's rule iterations; returns false on unboundedness.
    bool run(bool allow_artificial) {
        const std::size_t limit = art_start_;  // artificial columns never re-enter
        const std::size_t max_iter = 20000 + 200 * (m_ + n_total_);
        // The stabilized leaving rule below can cycle on degenerate vertices;
        // past this threshold fall back to the pure Bland rule, which cannot.
        const std::size_t bland_switch = 2000 + 20 * (m_ + n_total_);
        for (std::size_t iter = 0;; ++iter) {
            if (iter > max_iter) throw NumericBreakdown("simplex iteration limit exceeded");
            const bool pure_bland = iter >= bland_switch;
            // Entering: lowest index with negative reduced cost (Bland).
            int enter = -1;
            const std::size_t scan = allow_artificial ? n_total_ : limit;
            for (std::size_t j = 0; j < scan; ++j) {
                if (obj_[j] < -kPivotTol) {
                    enter = static_cast<int>(j);
                    break;
                }
            }
            if (enter < 0) return true;  // optimal
            // Leaving: min ratio; among (near-)tied rows prefer the largest
            // pivot element for numerical stability, then the lowest basis
            // index for determinism. The iteration cap guards against cycling.
            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            double best_pivot = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = tab_[i][enter];
                if (a > kPivotTol) {
                    const double ratio = tab_[i][n_total_] / a;
                    bool better;
                    if (pure_bland) {
                        better = ratio < best_ratio ||
                                 (ratio == best_ratio && leave >= 0 && basis_[i] < basis_[leave]);
                    } else {
                        better = ratio < best_ratio - kFeasTol ||
                                 (ratio < best_ratio + kFeasTol &&
                                  (a > best_pivot * (1.0 + kFeasTol) ||
                                   (a > best_pivot * (1.0 - kFeasTol) && leave >= 0 &&
                                    basis_[i] < basis_[leave])));
                    }
                    if (better) {
                        best_ratio = std::min(best_ratio, ratio);
                        best_pivot = a;
                        leave = static_cast<int>(i);
                    }
                }
            }
            if (leave < 0) return false;  // unbounded
            pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter));
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const double p = tab_[row][col];
        for (std::size_t j = 0; j <= n_total_; ++j) tab_[row][j] /= p;
        tab_[row][col] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            const double f = tab_[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n_total_; ++j) tab_[i][j] -= f * tab_[row][j];
            tab_[i][col] = 0.0;
        }
        const double f = obj_[col];
        if (f != 0.0) {
            for (std::size_t j = 0; j <= n_total_; ++j) obj_[j] -= f * tab_[row][j];
            obj_[col] = 0.0;
        }
        basis_[row] = static_cast<int>(col);
    }

    // After phase 1, pivot artificial variables out of the basis where possible;
    // rows where no structural/slack pivot exists are redundant and harmless
    // (the artificial stays basic at value zero and can never re-enter elsewhere).
    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (static_cast<std::size_t>(basis_[i]) < art_start_) continue;
            std::size_t best = art_start_;
            double best_abs = kPivotTol;
            for (std::size_t j = 0; j < art_start_; ++j) {
                if (std::abs(tab_[i][j]) > best_abs) {
                    best_abs = std::abs(tab_[i][j]);
                    best = j;
                }
            }
            if (best < art_start_) pivot(i, best);
        }
    }

    // Recompute the primal and dual solutions from the final basis against the
    // original data. Long degenerate pivot sequences let roundoff accumulate in
    // the tableau; solving B x_B = b and B^T w = c_B afresh removes that drift.
    void refactor(StandardResult& res) const {
        // Original column k of the scaled system, restricted to row r:
        // structural (k < nv_): s_r A[r][k]; slack i: s_i e_i; artificial: e_row.
        std::vector<int> art_row(n_total_ - art_start_, -1);
        {
            std::size_t next = 0;
            for (std::size_t i = 0; i < m_; ++i)
                if (negated_[i]) art_row[next++] = static_cast<int>(i);
        }
        auto column_entry = [&](std::size_t k, std::size_t r) -> double {
            const double s = negated_[r] ? -1.0 : 1.0;
            if (k < nv_) return s * A_[r][k];
            if (k < art_start_) return (k - nv_ == r) ? s : 0.0;
            return art_row[k - art_start_] == static_cast<int>(r) ? 1.0 : 0.0;
        };
        // LU factorization of the basis matrix with partial pivoting.
        std::vector<std::vector<double>> lu(m_, std::vector<double>(m_, 0.0));
        for (std::size_t col = 0; col < m_; ++col)
            for (std::size_t r = 0; r < m_; ++r)
                lu[r][col] = column_entry(static_cast<std::size_t>(basis_[col]), r);
        std::vector<std::size_t> perm(m_);
        for (std::size_t i = 0; i < m_; ++i) perm[i] = i;
        for (std::size_t k = 0; k < m_; ++k) {
            std::size_t piv = k;
            for (std::size_t r = k + 1; r < m_; ++r)
                if (std::abs(lu[r][k]) > std::abs(lu[piv][k])) piv = r;
            std::swap(lu[k], lu[piv]);
            std::swap(perm[k], perm[piv]);
            if (std::abs(lu[k][k]) < 1e-14) {
                fallback(res);  // numerically singular basis; keep the tableau values
                return;
            }
            for (std::size_t r = k + 1; r < m_; ++r) {
                const double f = lu[r][k] / lu[k][k];
                lu[r][k] = f;
                if (f == 0.0) continue;
                for (std::size_t j = k + 1; j < m_; ++j) lu[r][j] -= f * lu[k][j];
            }
        }
        auto solve_lower_upper = [&](std::vector<double> rhs) {
            std::vector<double> v(m_);
            for (std::size_t i = 0; i < m_; ++i) v[i] = rhs[perm[i]];
            for (std::size_t i = 0; i < m_; ++i)
                for (std::size_t j = 0; j < i; ++j) v[i] -= lu[i][j] * v[j];
            for (std::size_t i = m_; i-- > 0;) {
                for (std::size_t j = i + 1; j < m_; ++j) v[i] -= lu[i][j] * v[j];
                v[i] /= lu[i][i];
            }
            return v;
        };
        auto solve_transposed = [&](const std::vector<double>& rhs) {
            // Solve (P B)^T u = rhs via U^T then L^T, then undo the permutation.
            std::vector<double> v = rhs;
            for (std::size_t i = 0; i < m_; ++i) {
                for (std::size_t j = 0; j < i; ++j) v[i] -= lu[j][i] * v[j];
                v[i] /= lu[i][i];
            }
            for (std::size_t i = m_; i-- > 0;)
                for (std::size_t j = i + 1; j < m_; ++j) v[i] -= lu[j][i] * v[j];
            std::vector<double> y(m_);
            for (std::size_t i = 0; i < m_; ++i) y[perm[i]] = v[i];
            return y;
        };
        std::vector<double> scaled_b(m_);
        for (std::size_t i = 0; i < m_; ++i) scaled_b[i] = negated_[i] ? -b_[i] : b_[i];
        const std::vector<double> xb = solve_lower_upper(scaled_b);
        std::vector<double> cb(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (static_cast<std::size_t>(basis_[i]) < nv_) cb[i] = c_[basis_[i]];
        const std::vector<double> w = solve_transposed(cb);  // scaled-row duals
        res.x.assign(nv_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (static_cast<std::size_t>(basis_[i]) < nv_) res.x[basis_[i]] = xb[i];
        res.y.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) res.y[i] = negated_[i] ? -w[i] : w[i];
        res.value = 0.0;
        for (std::size_t j = 0; j < nv_; ++j) res.value += c_[j] * res.x[j];
    }

    // Tableau-based extraction, used only if refactorization hits a singular basis.
    void fallback(StandardResult& res) const {
        res.value = obj_[n_total_];
        res.x.assign(nv_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < nv_)
                res.x[basis_[i]] = tab_[i][n_total_];
        res.y.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double z = obj_[nv_ + i];  // reduced cost of slack i
            res.y[i] = negated_[i] ? -z : z;
        }
    }

    std::size_t m_, nv_, n_total_ = 0, art_start_ = 0;
    std::vector<double> c_;
    std::vector<std::vector<double>> A_;
    std::vector<double> b_;
    std::vector<std::vector<double>> tab_;
    std::vector<double> obj_;  // reduced-cost row, entry j = z_j - c_j; last = objective value
    std::vector<int> basis_;
    std::vector<bool> negated_;
};

}  // namespace detail

// Solve a general program by reduction to standard form. Deterministic:
// identical inputs produce identical pivot sequences and results.
inline LpSolution solve(const LinearProgram& lp) {
    const std::size_t nv = lp.num_vars();
    std::vector<VarSign> sign = lp.sign;
    if (sign.empty()) sign.assign(nv, VarSign::Free);
    if (sign.size() != nv) throw std::invalid_argument("lp: sign size mismatch");
    const bool minimize = lp.sense == Sense::Minimize;

    // Column map: each original variable becomes one nonnegative column
    // (possibly negated) or a split pair for free variables.
    std::vector<std::pair<int, int>> cols(nv);  // (positive col, negative col or -1)
    std::size_t nc = 0;
    for (std::size_t j = 0; j < nv; ++j) {
        switch (sign[j]) {
            case VarSign::NonNegative: cols[j] = {static_cast<int>(nc++), -1}; break;
            case VarSign::NonPositive: cols[j] = {-1, static_cast<int>(nc++)}; break;
            case VarSign::Free:
                cols[j] = {static_cast<int>(nc), static_cast<int>(nc + 1)};
                nc += 2;
                break;
        }
    }

    const std::size_t n_ineq = lp.rows.size(), n_eq = lp.eq_rows.size();
    const std::size_t m = n_ineq + 2 * n_eq;
    std::vector<std::vector<double>> A(m, std::vector<double>(nc, 0.0));
    std::vector<double> b(m, 0.0);
    auto emit = [&](std::size_t row, const std::vector<double>& src, double scale) {
        for (std::size_t j = 0; j < nv; ++j) {
            const double v = scale * src[j];
            if (v == 0.0) continue;
            if (cols[j].first >= 0) A[row][cols[j].first] += v;
            if (cols[j].second >= 0) A[row][cols[j].second] -= v;
        }
    };
    for (std::size_t i = 0; i < n_ineq; ++i) {
        emit(i, lp.rows[i], 1.0);
        b[i] = lp.rhs[i];
    }
    for (std::size_t k = 0; k < n_eq; ++k) {
        emit(n_ineq + 2 * k, lp.eq_rows[k], 1.0);
        b[n_ineq + 2 * k] = lp.eq_rhs[k];
        emit(n_ineq + 2 * k + 1, lp.eq_rows[k], -1.0);
        b[n_ineq + 2 * k + 1] = -lp.eq_rhs[k];
    }
    std::vector<double> c(nc, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
        const double v = minimize ? -lp.objective[j] : lp.objective[j];
        if (cols[j].first >= 0) c[cols[j].first] += v;
        if (cols[j].second >= 0) c[cols[j].second] -= v;
    }

    detail::StandardSimplex simplex(A, b, c);
    detail::StandardResult sr = simplex.solve();
    LpSolution out;
    out.status = sr.status;
    if (sr.status != LpStatus::Optimal) return out;

    out.primal.assign(nv, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
        double v = 0.0;
        if (cols[j].first >= 0) v += sr.x[cols[j].first];
        if (cols[j].second >= 0) v -= sr.x[cols[j].second];
        out.primal[j] = v;
    }
    double value = 0.0;
    for (std::size_t j = 0; j < nv; ++j) value += lp.objective[j] * out.primal[j];
    out.value = value;
    const double dual_flip = minimize ? -1.0 : 1.0;
    out.dual.assign(n_ineq, 0.0);
    for (std::size_t i = 0; i < n_ineq; ++i) out.dual[i] = dual_flip * sr.y[i];
    out.eq_dual.assign(n_eq, 0.0);
    for (std::size_t k = 0; k < n_eq; ++k)
        out.eq_dual[k] = dual_flip * (sr.y[n_ineq + 2 * k] - sr.y[n_ineq + 2 * k + 1]);

    // Residual guard: primal feasibility and strong duality.
    double feas = 0.0;
    for (std::size_t i = 0; i < n_ineq; ++i) {
        double ax = 0.0;
        for (std::size_t j = 0; j < nv; ++j) ax += lp.rows[i][j] * out.primal[j];
        feas = std::max(feas, ax - lp.rhs[i]);
    }
    for (std::size_t k = 0; k < n_eq; ++k) {
        double ex = 0.0;
        for (std::size_t j = 0; j < nv; ++j) ex += lp.eq_rows[k][j] * out.primal[j];
        feas = std::max(feas, std::abs(ex - lp.eq_rhs[k]));
    }
    double dual_value = 0.0;
    for (std::size_t i = 0; i < n_ineq; ++i) dual_value += lp.rhs[i] * out.dual[i];
    for (std::size_t k = 0; k < n_eq; ++k) dual_value += lp.eq_rhs[k] * out.eq_dual[k];
    const double scale = 1.0 + std::abs(out.value);
    if (feas > 1e-6 * scale || std::abs(out.value - dual_value) > 1e-6 * scale)
        throw NumericBreakdown("lp: residuals exceed tolerance after solve (feasibility " +
                               std::to_string(feas) + ", duality gap " +
                               std::to_string(std::abs(out.value - dual_value)) + ")");
    return out;
}

// Complementary-slackness verdict for the standard form
//   maximize c.x  s.t.  A x <= b, x >= 0,   dual:  y >= 0, A^T y >= c.
struct SlacknessVerdict {
    bool pass = false;
    double primal_feasibility = 0.0;  // max(A x - b, -x)
    double dual_feasibility = 0.0;    // max(c - A^T y, -y)
    double primal_slack = 0.0;        // max_j |x_j (c - A^T y)_j|
    double dual_slack = 0.0;          // max_i |y_i (b - A x)_i|
    double duality_gap = 0.0;         // |c.x - b.y|
    std::string failure;              // first violated condition, empty if pass
};

inline SlacknessVerdict check_complementary_slackness(const std::vector<std::vector<double>>& A,
                                                      const std::vector<double>& b,
                                                      const std::vector<double>& c,
                                                      const std::vector<double>& x,
                                                      const std::vector<double>& y, double tol) {
    const std::size_t m = A.size(), n = c.size();
    SlacknessVerdict v;
    std::vector<double> slack(m, 0.0);   // b - A x
    std::vector<double> rcost(n, 0.0);   // A^T y - c
    for (std::size_t i = 0; i < m; ++i) {
        double ax = 0.0;
        for (std::size_t j = 0; j < n; ++j) ax += A[i][j] * x[j];
        slack[i] = b[i] - ax;
        v.primal_feasibility = std::max(v.primal_feasibility, -slack[i]);
        v.dual_feasibility = std::max(v.dual_feasibility, -y[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        double aty = 0.0;
        for (std::size_t i = 0; i < m; ++i) aty += A[i][j] * y[i];
        rcost[j] = aty - c[j];
        v.primal_feasibility = std::max(v.primal_feasibility, -x[j]);
        v.dual_feasibility = std::max(v.dual_feasibility, -rcost[j]);
    }
    for (std::size_t j = 0; j < n; ++j)
        v.primal_slack = std::max(v.primal_slack, std::abs(x[j] * rcost[j]));
    for (std::size_t i = 0; i < m; ++i)
        v.dual_slack = std::max(v.dual_slack, std::abs(y[i] * slack[i]));
    double cx = 0.0, by = 0.0;
    for (std::size_t j = 0; j < n; ++j) cx += c[j] * x[j];
    for (std::size_t i = 0; i < m; ++i) by += b[i] * y[i];
    v.duality_gap = std::abs(cx - by);
    if (v.primal_feasibility > tol) v.failure = "primal feasibility";
    else if (v.dual_feasibility > tol) v.failure = "dual feasibility";
    else if (v.primal_slack > tol) v.failure = "primal slackness";
    else if (v.dual_slack > tol) v.failure = "dual slackness";
    else if (v.duality_gap > tol) v.failure = "duality gap";
    v.pass = v.failure.empty();
    return v;
}

}  // namespace polygon_chsh
