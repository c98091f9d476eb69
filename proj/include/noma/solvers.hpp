#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace noma {

using Vec = std::vector<double>;

// maximize c.x  s.t.  rows[r].x <= rhs[r],  lower <= x <= upper.
// Lower bounds default to 0; -inf marks a free variable, +inf no upper bound.
struct LinearProgram {
    Vec objective;
    std::vector<Vec> rows;
    Vec rhs;
    Vec lower;
    Vec upper;

    explicit LinearProgram(int num_vars = 0);
    int num_vars() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }
    void add_row(Vec coeffs, double bound);
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Vec x;
    double objective = 0.0;
};

class DegeneratePivotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dense two-phase tableau simplex. Dantzig pricing, switching permanently to
// Bland's rule after a run of degenerate pivots. After a successful solve the
// basis can be reused for a new objective over the same constraints.
class SimplexSolver {
public:
    explicit SimplexSolver(const LinearProgram& lp);

    LpSolution solve();
    LpSolution reoptimize(const Vec& objective);

    int pivots() const { return pivots_; }
    // Recompute optimal solutions from a fresh factorization of the basis.
    void set_refactor(bool on) { refactor_ = on; }

private:
    void pivot(int r, int s);
    bool run(int phase);
    void set_objective(const Vec& c);
    LpSolution extract(LpStatus status);
    void refactor(Vec& t) const;
    double& at(int r, int c) { return d_[static_cast<std::size_t>(r) * (n_ + 2) + c]; }

    int m_ = 0, n_ = 0;
    int orig_vars_ = 0;
    std::vector<double> d_;
    std::vector<Vec> rows_;  // equilibrated constraint rows, kept for refactoring
    Vec rhs_;
    std::vector<int> basis_, nonbasis_;
    // Mapping from original variables to tableau columns: x = shift + col_pos - col_neg.
    std::vector<int> col_pos_, col_neg_;
    Vec shift_;
    Vec cost_;  // tableau-column costs of the current objective
    double cost_offset_ = 0.0;
    bool feasible_basis_ = false;
    bool bland_ = false;
    bool refactor_ = false;
    int degenerate_run_ = 0;
    int pivots_ = 0;
};

LpSolution solve_lp(const LinearProgram& lp);

struct ConvexSubproblem {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    LinearProgram polytope;   // objective ignored
    double tolerance = 1e-6;  // stop when FW gap <= tolerance * (1 + |value|)
    int max_iterations = 5000;
};

struct ConvexResult {
    Vec x;
    double value = 0.0;
    double gap = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

// Pairwise Frank-Wolfe; the linear minimization oracle is the simplex
// above, warm-started across iterations.
ConvexResult minimize_convex(const ConvexSubproblem& problem, const Vec& start);

// Largest violation of the polytope constraints at x (0 when feasible).
double max_violation(const LinearProgram& lp, const Vec& x);

}  // namespace noma
