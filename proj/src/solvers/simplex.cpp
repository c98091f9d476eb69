#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "noma/solvers.hpp"

namespace noma {

namespace {
constexpr double kEps = 1e-9;
constexpr double kPivotFloor = 1e-11;
constexpr int kDegenerateRunLimit = 50;
}  // namespace

LinearProgram::LinearProgram(int num_vars)
    : objective(num_vars, 0.0),
      lower(num_vars, 0.0),
      upper(num_vars, std::numeric_limits<double>::infinity()) {}

void LinearProgram::add_row(Vec coeffs, double bound) {
    coeffs.resize(objective.size(), 0.0);
    rows.push_back(std::move(coeffs));
    rhs.push_back(bound);
}

double max_violation(const LinearProgram& lp, const Vec& x) {
    double worst = 0.0;
    for (int r = 0; r < lp.num_rows(); ++r) {
        double lhs = 0.0;
        for (int j = 0; j < lp.num_vars(); ++j) lhs += lp.rows[r][j] * x[j];
        worst = std::max(worst, lhs - lp.rhs[r]);
    }
    for (int j = 0; j < lp.num_vars(); ++j) {
        worst = std::max(worst, lp.lower[j] - x[j]);
        worst = std::max(worst, x[j] - lp.upper[j]);
    }
    return worst;
}

SimplexSolver::SimplexSolver(const LinearProgram& lp) {
    const int nv = lp.num_vars();
    if (nv < 1) throw std::invalid_argument("LinearProgram needs at least one variable");
    orig_vars_ = nv;
    col_pos_.assign(nv, -1);
    col_neg_.assign(nv, -1);
    shift_.assign(nv, 0.0);

    int cols = 0;
    for (int j = 0; j < nv; ++j) {
        if (std::isfinite(lp.lower[j])) {
            shift_[j] = lp.lower[j];
            col_pos_[j] = cols++;
        } else {
            col_pos_[j] = cols++;
            col_neg_[j] = cols++;
        }
    }
    n_ = cols;

    std::vector<Vec> rows;
    Vec rhs;
    auto push_row = [&](const Vec& a, double b) {
        Vec t(n_, 0.0);
        double shifted = b;
        for (int j = 0; j < nv; ++j) {
            if (a[j] == 0.0) continue;
            t[col_pos_[j]] += a[j];
            if (col_neg_[j] >= 0) t[col_neg_[j]] -= a[j];
            shifted -= a[j] * shift_[j];
        }
        // Rows are equilibrated so the absolute tolerances below mean the same thing everywhere.
        double scale = 0.0;
        for (double v : t) scale = std::max(scale, std::fabs(v));
        if (scale > 0.0) {
            for (double& v : t) v /= scale;
            shifted /= scale;
        }
        rows.push_back(std::move(t));
        rhs.push_back(shifted);
    };
    for (int r = 0; r < lp.num_rows(); ++r) {
        for (double v : lp.rows[r])
            if (!std::isfinite(v)) throw std::invalid_argument("LinearProgram: non-finite coefficient");
        push_row(lp.rows[r], lp.rhs[r]);
    }
    for (int j = 0; j < nv; ++j) {
        if (!std::isfinite(lp.upper[j])) continue;
        Vec e(nv, 0.0);
        e[j] = 1.0;
        push_row(e, lp.upper[j]);
    }
    m_ = static_cast<int>(rows.size());
    rows_ = rows;
    rhs_ = rhs;

    d_.assign(static_cast<std::size_t>(m_ + 2) * (n_ + 2), 0.0);
    basis_.resize(m_);
    nonbasis_.resize(n_ + 1);
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < n_; ++j) at(i, j) = rows[i][j];
        at(i, n_) = -1.0;
        at(i, n_ + 1) = rhs[i];
        basis_[i] = n_ + i;
    }
    for (int j = 0; j < n_; ++j) nonbasis_[j] = j;
    nonbasis_[n_] = -1;
    at(m_ + 1, n_) = 1.0;

    cost_.assign(n_, 0.0);
    Vec c = lp.objective;
    c.resize(nv, 0.0);
    set_objective(c);
}

void SimplexSolver::set_objective(const Vec& c) {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    cost_offset_ = 0.0;
    for (int j = 0; j < orig_vars_; ++j) {
        cost_[col_pos_[j]] += c[j];
        if (col_neg_[j] >= 0) cost_[col_neg_[j]] -= c[j];
        cost_offset_ += c[j] * shift_[j];
    }
    auto cost_of = [&](int id) { return (id >= 0 && id < n_) ? cost_[id] : 0.0; };
    for (int j = 0; j <= n_ + 1; ++j) at(m_, j) = 0.0;
    for (int i = 0; i < m_; ++i) {
        double cb = cost_of(basis_[i]);
        if (cb == 0.0) continue;
        for (int j = 0; j <= n_ + 1; ++j) at(m_, j) += cb * at(i, j);
    }
    for (int j = 0; j <= n_; ++j) at(m_, j) -= cost_of(nonbasis_[j]);
}

void SimplexSolver::pivot(int r, int s) {
    double piv = at(r, s);
    if (std::fabs(piv) < kPivotFloor)
        throw DegeneratePivotError("simplex pivot magnitude below 1e-11");
    ++pivots_;
    const int w = n_ + 2;
    double* a = &d_[static_cast<std::size_t>(r) * w];
    double inv = 1.0 / piv;
    for (int i = 0; i < m_ + 2; ++i) {
        if (i == r) continue;
        double* b = &d_[static_cast<std::size_t>(i) * w];
        if (std::fabs(b[s]) <= 1e-300) continue;
        double f = b[s] * inv;
        for (int j = 0; j < w; ++j) b[j] -= a[j] * f;
        b[s] = a[s] * f;
    }
    for (int j = 0; j < w; ++j)
        if (j != s) a[j] *= inv;
    for (int i = 0; i < m_ + 2; ++i)
        if (i != r) at(i, s) *= -inv;
    a[s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
}

bool SimplexSolver::run(int phase) {
    const int x = m_ + phase - 1;
    const long cap = 200L * (m_ + n_ + 10);
    for (long iter = 0;; ++iter) {
        if (iter > cap) throw SolverFailure("simplex iteration cap exceeded");
        int s = -1;
        for (int j = 0; j <= n_; ++j) {
            if (nonbasis_[j] == -phase) continue;
            double v = at(x, j);
            if (bland_) {
                if (v < -kEps && (s == -1 || nonbasis_[j] < nonbasis_[s])) s = j;
            } else if (s == -1 || v < at(x, s) || (v == at(x, s) && nonbasis_[j] < nonbasis_[s])) {
                s = j;
            }
        }
        if (s == -1 || at(x, s) >= -kEps) return true;
        int r = -1;
        for (int i = 0; i < m_; ++i) {
            if (at(i, s) <= kEps) continue;
            if (r == -1) {
                r = i;
                continue;
            }
            // Rounding leaves basic values at -1e-14 and near-equal ratios; exact
            // comparisons there let Bland's rule cycle.
            double ri = std::max(at(i, n_ + 1), 0.0) / at(i, s), rr = std::max(at(r, n_ + 1), 0.0) / at(r, s);
            double tol = kEps * (1.0 + std::min(ri, rr));
            if (ri < rr - tol || (ri <= rr + tol && basis_[i] < basis_[r])) r = i;
        }
        if (r == -1) return false;
        if (std::max(at(r, n_ + 1), 0.0) / at(r, s) <= kEps) {
            if (++degenerate_run_ > kDegenerateRunLimit) bland_ = true;
        } else {
            degenerate_run_ = 0;
        }
        pivot(r, s);
    }
}

// Recomputes the basic solution from the stored rows; the tableau accumulates
// rounding over many pivots.
void SimplexSolver::refactor(Vec& t) const {
    if (m_ == 0) return;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m_, m_);
    Eigen::VectorXd b(m_);
    for (int i = 0; i < m_; ++i) b(i) = rhs_[i];
    for (int k = 0; k < m_; ++k) {
        int id = basis_[k];
        if (id >= 0 && id < n_) {
            for (int i = 0; i < m_; ++i) B(i, k) = rows_[i][id];
        } else if (id >= n_) {
            B(id - n_, k) = 1.0;
        } else {
            B.col(k).setConstant(-1.0);
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    Eigen::VectorXd x = lu.solve(b);
    x += lu.solve(b - B * x);
    if (!x.allFinite() || (B * x - b).lpNorm<Eigen::Infinity>() > 1e-9 * (1.0 + b.lpNorm<Eigen::Infinity>())) return;
    for (int k = 0; k < m_; ++k)
        if (basis_[k] >= 0 && basis_[k] < n_) t[basis_[k]] = x(k);
}

LpSolution SimplexSolver::extract(LpStatus status) {
    LpSolution sol;
    sol.status = status;
    Vec t(n_, 0.0);
    for (int i = 0; i < m_; ++i)
        if (basis_[i] >= 0 && basis_[i] < n_) t[basis_[i]] = at(i, n_ + 1);
    if (refactor_ && status == LpStatus::optimal) refactor(t);
    sol.x.assign(orig_vars_, 0.0);
    for (int j = 0; j < orig_vars_; ++j) {
        double v = shift_[j] + t[col_pos_[j]];
        if (col_neg_[j] >= 0) v -= t[col_neg_[j]];
        sol.x[j] = v;
    }
    double obj = cost_offset_;
    for (int j = 0; j < n_; ++j) obj += cost_[j] * t[j];
    sol.objective = obj;
    return sol;
}

LpSolution SimplexSolver::solve() {
    if (!feasible_basis_) {
        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
        if (m_ > 0 && at(r, n_ + 1) < -kEps) {
            pivot(r, n_);
            if (!run(2) || at(m_ + 1, n_ + 1) < -kEps) return extract(LpStatus::infeasible);
            for (int i = 0; i < m_; ++i) {
                if (basis_[i] != -1) continue;
                int s = -1;
                for (int j = 0; j < n_; ++j)
                    if (s == -1 || std::fabs(at(i, j)) > std::fabs(at(i, s))) s = j;
                if (s >= 0 && std::fabs(at(i, s)) >= kPivotFloor) pivot(i, s);
            }
        }
        feasible_basis_ = true;
    }
    bool bounded = run(1);
    return extract(bounded ? LpStatus::optimal : LpStatus::unbounded);
}

LpSolution SimplexSolver::reoptimize(const Vec& objective) {
    Vec c = objective;
    c.resize(orig_vars_, 0.0);
    set_objective(c);
    return solve();
}

LpSolution solve_lp(const LinearProgram& lp) {
    SimplexSolver solver(lp);
    solver.set_refactor(true);
    return solver.solve();
}

}  // namespace noma
