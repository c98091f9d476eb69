#include <algorithm>
#include <cmath>

#include "noma/solvers.hpp"

namespace noma {

namespace {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vec axpy(const Vec& x, double g, const Vec& d) {
    Vec y(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += g * d[i];
    return y;
}

// Minimizes the convex function along x + g*d on [0, gmax] by bisection on the
// directional derivative.
double line_search(const ConvexSubproblem& p, const Vec& x, const Vec& d, double gmax) {
    auto deriv = [&](double g) { return dot(p.gradient(axpy(x, g, d)), d); };
    if (deriv(gmax) <= 0.0) return gmax;
    double lo = 0.0, hi = gmax;
    for (int it = 0; it < 60 && hi - lo > 1e-16 * gmax; ++it) {
        double mid = 0.5 * (lo + hi);
        if (deriv(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return lo;
}

}  // namespace

ConvexResult minimize_convex(const ConvexSubproblem& problem, const Vec& start) {
    const LinearProgram& poly = problem.polytope;
    if (static_cast<int>(start.size()) != poly.num_vars())
        throw std::invalid_argument("minimize_convex: start has wrong dimension");
    double scale = 1.0;
    for (double b : poly.rhs) scale = std::max(scale, std::fabs(b));
    if (max_violation(poly, start) > 1e-8 * scale)
        throw std::invalid_argument("minimize_convex: infeasible start");

    ConvexResult res;
    res.x = start;
    res.value = problem.value(res.x);
    if (!std::isfinite(res.value)) throw SolverFailure("minimize_convex: non-finite value at start");

    SimplexSolver lmo(poly);
    std::vector<Vec> atoms{start};
    std::vector<double> alpha{1.0};

    for (res.iterations = 0; res.iterations < problem.max_iterations; ++res.iterations) {
        Vec g = problem.gradient(res.x);
        for (double v : g)
            if (!std::isfinite(v)) throw SolverFailure("minimize_convex: non-finite gradient");
        Vec neg(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) neg[i] = -g[i];
        LpSolution vertex = lmo.reoptimize(neg);
        if (vertex.status != LpStatus::optimal) throw SolverFailure("minimize_convex: linear oracle failed");

        double gx = dot(g, res.x);
        res.gap = gx - dot(g, vertex.x);
        if (res.gap <= problem.tolerance * (1.0 + std::fabs(res.value))) {
            res.converged = true;
            break;
        }

        // Pairwise step: move weight from the worst atom to the new vertex.
        std::size_t away = 0;
        double away_val = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < atoms.size(); ++a) {
            double v = dot(g, atoms[a]);
            if (v > away_val) {
                away_val = v;
                away = a;
            }
        }
        Vec d(res.x.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = vertex.x[i] - atoms[away][i];
        double step = line_search(problem, res.x, d, alpha[away]);
        Vec next = axpy(res.x, step, d);
        double next_val = problem.value(next);
        if (!std::isfinite(next_val)) throw SolverFailure("minimize_convex: non-finite value");
        if (!(next_val <= res.value)) break;

        alpha[away] -= step;
        auto it = std::find(atoms.begin(), atoms.end(), vertex.x);
        if (it == atoms.end()) {
            atoms.push_back(vertex.x);
            alpha.push_back(step);
        } else {
            alpha[it - atoms.begin()] += step;
        }
        for (std::size_t a = atoms.size(); a-- > 0;)
            if (alpha[a] <= 1e-14) {
                atoms.erase(atoms.begin() + a);
                alpha.erase(alpha.begin() + a);
            }
        res.x = std::move(next);
        res.value = next_val;
    }
    return res;
}

}  // namespace noma
