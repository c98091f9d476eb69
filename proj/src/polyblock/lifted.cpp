#include <algorithm>
#include <cmath>
#include <limits>

#include "noma/polyblock.hpp"
#include "noma/sca.hpp"

namespace noma {

Layout full_layout(const ProblemInstance& inst) {
    Layout l;
    for (int i = 0; i < inst.num_subcarriers; ++i)
        for (int m = 0; m < inst.num_users; ++m)
            for (int n = 0; n < inst.num_users; ++n) l.triples.push_back({i, m, n});
    return l;
}

Layout face_layout(const std::vector<std::pair<int, int>>& pairs) {
    Layout l;
    for (int i = 0; i < static_cast<int>(pairs.size()); ++i)
        if (pairs[i].first >= 0) l.triples.push_back({i, pairs[i].first, pairs[i].second});
    return l;
}

std::vector<double> layout_weights(const ProblemInstance& inst, const Layout& layout) {
    const int t = static_cast<int>(layout.triples.size());
    std::vector<double> mu(2 * t);
    for (int k = 0; k < t; ++k) {
        mu[k] = inst.weight(layout.triples[k].m);
        mu[t + k] = inst.weight(layout.triples[k].n);
    }
    return mu;
}

VertexVector initial_vertex(const ProblemInstance& inst, const Layout& layout) {
    const int t = static_cast<int>(layout.triples.size());
    VertexVector z(2 * t);
    for (int k = 0; k < t; ++k) {
        const Triple& tr = layout.triples[k];
        z[k] = 1.0 + inst.gain(tr.i, tr.m) * inst.p_max;
        z[t + k] = 1.0 + inst.gain(tr.i, tr.n) * inst.p_max;
    }
    return z;
}

VertexVector initial_vertex(const ProblemInstance& inst) { return initial_vertex(inst, full_layout(inst)); }

double f_value(const ProblemInstance& inst, const Layout& layout, int d, const Vec& p) {
    const int t = static_cast<int>(layout.triples.size());
    if (d < t) {
        const Triple& tr = layout.triples[d];
        return 1.0 + inst.gain(tr.i, tr.m) * (p[d] + p[t + d]);
    }
    const Triple& tr = layout.triples[d - t];
    return 1.0 + inst.gain(tr.i, tr.n) * p[d];
}

double g_value(const ProblemInstance& inst, const Layout& layout, int d, const Vec& p) {
    const int t = static_cast<int>(layout.triples.size());
    if (d < t) {
        const Triple& tr = layout.triples[d];
        return 1.0 + inst.gain(tr.i, tr.m) * p[t + d];
    }
    return 1.0;
}

LinearProgram build_dinkelbach_lp(const ProblemInstance& inst, const Layout& layout, const VertexVector& z,
                                  double lambda_n) {
    if (lambda_n < 0.0) throw InvalidInput("build_dinkelbach_lp: lambda must be nonnegative");
    const int t = static_cast<int>(layout.triples.size());
    const int tau = 2 * t;
    LinearProgram lp(2 * t + 1);
    lp.objective[tau] = 1.0;
    lp.lower[tau] = -std::numeric_limits<double>::infinity();
    // tau - (f_d - lambda z_d g_d) <= 0 with f_d, g_d affine in p~.
    for (int k = 0; k < t; ++k) {
        const Triple& tr = layout.triples[k];
        double hm = inst.gain(tr.i, tr.m), hn = inst.gain(tr.i, tr.n);
        double cu = lambda_n * z[k];
        Vec ru(lp.num_vars(), 0.0);
        ru[tau] = 1.0;
        ru[k] = -hm;
        ru[t + k] = -hm * (1.0 - cu);
        lp.add_row(std::move(ru), 1.0 - cu);
        double cv = lambda_n * z[t + k];
        Vec rv(lp.num_vars(), 0.0);
        rv[tau] = 1.0;
        rv[t + k] = -hn;
        lp.add_row(std::move(rv), 1.0 - cv);
    }
    // The u rows come first in the layout order, then the v rows.
    std::vector<Vec> rows(lp.rows.size());
    Vec rhs(lp.rows.size());
    for (int k = 0; k < t; ++k) {
        rows[k] = std::move(lp.rows[2 * k]);
        rhs[k] = lp.rhs[2 * k];
        rows[t + k] = std::move(lp.rows[2 * k + 1]);
        rhs[t + k] = lp.rhs[2 * k + 1];
    }
    lp.rows = std::move(rows);
    lp.rhs = std::move(rhs);
    Vec budget(lp.num_vars(), 1.0);
    budget[tau] = 0.0;
    lp.add_row(std::move(budget), inst.p_max);
    return lp;
}

LinearProgram build_dinkelbach_lp(const ProblemInstance& inst, const VertexVector& z, double lambda_n) {
    return build_dinkelbach_lp(inst, full_layout(inst), z, lambda_n);
}

namespace {

double min_ratio(const ProblemInstance& inst, const Layout& layout, const VertexVector& z, const Vec& p) {
    double r = std::numeric_limits<double>::infinity();
    for (int d = 0; d < layout.dim(); ++d)
        r = std::min(r, f_value(inst, layout, d, p) / (z[d] * g_value(inst, layout, d, p)));
    return r;
}

// Rows d of the LP at lambda, each divided by g_d at the previous iterate:
// maximize tau s.t. tau <= (f_d - lambda z_d g_d) / g_d(p_prev). The sign of
// the optimum matches the unscaled program, and the update converges
// superlinearly where the unscaled one can crawl.
LinearProgram scaled_lp(const ProblemInstance& inst, const Layout& layout, const VertexVector& z, double lambda,
                        const Vec& p_prev) {
    LinearProgram lp = build_dinkelbach_lp(inst, layout, z, lambda);
    const int tau = layout.dim();
    for (int d = 0; d < layout.dim(); ++d) {
        double g = g_value(inst, layout, d, p_prev);
        if (g == 1.0) continue;
        for (int j = 0; j < tau; ++j) lp.rows[d][j] /= g;
        lp.rhs[d] /= g;
    }
    return lp;
}

struct LpPoint {
    double tau;
    Vec p;
};

LpPoint solve_point(const LinearProgram& lp, int dim, const std::vector<double>& trace) {
    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal)
        throw ProjectionError(sol.status == LpStatus::infeasible ? "project: Dinkelbach LP reported infeasible"
                                                                 : "project: Dinkelbach LP reported unbounded",
                              trace);
    LpPoint out{sol.objective, Vec(sol.x.begin(), sol.x.begin() + dim)};
    for (double& v : out.p) v = std::max(v, 0.0);
    return out;
}

}  // namespace

ProjectionResult project(const ProblemInstance& inst, const Layout& layout, const VertexVector& z, double delta,
                         int max_iterations) {
    if (!(delta > 0.0)) throw InvalidInput("project: delta must be positive");
    if (static_cast<int>(z.size()) != layout.dim()) throw InvalidInput("project: vertex has wrong dimension");
    for (double v : z)
        if (!(v >= 1.0) || !std::isfinite(v)) throw InvalidInput("project: vertex entries must be finite and >= 1");
    const int t = static_cast<int>(layout.triples.size());
    const int dim = 2 * t;

    ProjectionResult res;
    const double zmin = *std::min_element(z.begin(), z.end());
    // No coordinate can exceed its single-user value at full budget.
    VertexVector cap = initial_vertex(inst, layout);
    double upper = std::numeric_limits<double>::infinity();
    for (int d = 0; d < dim; ++d) upper = std::min(upper, cap[d] / z[d]);
    double lambda = 0.0;
    Vec attained(dim, 0.0);
    bool done = false;
    for (int it = 1; it <= max_iterations; ++it) {
        res.lambda_trace.push_back(lambda);
        res.dinkelbach_iterations = it;
        LpPoint sol = solve_point(it == 1 ? build_dinkelbach_lp(inst, layout, z, lambda)
                                          : scaled_lp(inst, layout, z, lambda, attained),
                                  dim, res.lambda_trace);
        double ratio = min_ratio(inst, layout, z, sol.p);
        // Stopping is always certified on the unscaled program, which also covers a
        // scaled step that stalls at rounding level.
        if (it > 1 && (sol.tau <= delta || !(ratio > lambda))) {
            sol = solve_point(build_dinkelbach_lp(inst, layout, z, lambda), dim, res.lambda_trace);
            ratio = min_ratio(inst, layout, z, sol.p);
        }
        res.residual_trace.push_back(sol.tau);
        if (sol.tau <= delta) {
            res.lambda_upper = std::min(upper, lambda + std::max(sol.tau, 0.0) / zmin);
            if (ratio >= lambda) {
                lambda = ratio;
                attained = sol.p;
            }
            res.lambda_upper = std::max(res.lambda_upper, lambda);
            done = true;
            break;
        }
        if (!(ratio > lambda))
            throw ProjectionError("project: Dinkelbach parameter failed to increase", res.lambda_trace);
        double gmax = 1.0;
        if (it > 1)
            for (int d = 0; d < t; ++d) gmax = std::max(gmax, g_value(inst, layout, d, attained));
        upper = std::min(upper, lambda + sol.tau * gmax / zmin);

        // Safeguard: try the midpoint of what is left; either it is attained or it
        // becomes the new upper bound, so the bracket at least halves.
        double mid = 0.5 * (ratio + upper);
        if (mid > ratio * (1.0 + 1e-12)) {
            LpPoint probe = solve_point(scaled_lp(inst, layout, z, mid, sol.p), dim, res.lambda_trace);
            double r2 = min_ratio(inst, layout, z, probe.p);
            if (probe.tau >= 0.0 || r2 >= mid) {
                if (r2 > ratio) {
                    ratio = r2;
                    sol = probe;
                }
            } else {
                upper = mid;
            }
        }
        lambda = ratio;
        attained = sol.p;
        upper = std::max(upper, lambda);
    }
    if (!done) throw ProjectionError("project: Dinkelbach iteration cap reached", res.lambda_trace);

    res.lambda = lambda;
    res.phi.resize(z.size());
    for (std::size_t d = 0; d < z.size(); ++d) res.phi[d] = std::max(1.0, lambda * z[d]);
    res.layout_power = attained;
    const int k = inst.num_users, half = inst.num_subcarriers * k * k;
    res.lifted.assign(2 * static_cast<std::size_t>(half), 0.0);
    for (int j = 0; j < t; ++j) {
        const Triple& tr = layout.triples[j];
        int slot = triple_slot(tr.i, tr.m, tr.n, k);
        res.lifted[slot] = attained[j];
        res.lifted[half + slot] = attained[t + j];
    }
    return res;
}

ProjectionResult project(const ProblemInstance& inst, const VertexVector& z, double delta, int max_iterations) {
    return project(inst, full_layout(inst), z, delta, max_iterations);
}

std::vector<VertexVector> generate_children(const VertexVector& z, const VertexVector& phi) {
    if (phi.size() != z.size()) throw InvalidInput("generate_children: size mismatch");
    std::vector<VertexVector> out;
    out.reserve(z.size());
    for (std::size_t d = 0; d < z.size(); ++d) {
        if (phi[d] > z[d]) throw InvalidInput("generate_children: phi must not exceed z");
        VertexVector c = z;
        c[d] = std::max(1.0, phi[d]);
        out.push_back(std::move(c));
    }
    return out;
}

int select_best_vertex(const std::vector<double>& mu, const std::vector<Candidate>& candidates) {
    if (candidates.empty()) throw InvalidInput("select_best_vertex: empty candidate list");
    int best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const VertexVector& phi = candidates[c].second.phi;
        double v = 0.0;
        for (std::size_t d = 0; d < phi.size(); ++d) v += mu[d] * std::log2(phi[d]);
        if (v > best_val) {
            best_val = v;
            best = static_cast<int>(c);
        }
    }
    return best;
}

int select_best_vertex(const ProblemInstance& inst, const std::vector<Candidate>& candidates) {
    return select_best_vertex(layout_weights(inst, full_layout(inst)), candidates);
}

VertexVector lifted_point(const ProblemInstance& inst, const LiftedPower& lifted) {
    const int k = inst.num_users, half = inst.num_subcarriers * k * k;
    VertexVector z(2 * static_cast<std::size_t>(half));
    for (int i = 0; i < inst.num_subcarriers; ++i)
        for (int m = 0; m < k; ++m)
            for (int n = 0; n < k; ++n) {
                int s = triple_slot(i, m, n, k);
                double a = lifted[s], b = lifted[half + s];
                double hm = inst.gain(i, m), hn = inst.gain(i, n);
                z[s] = (1.0 + hm * (a + b)) / (1.0 + hm * b);
                z[half + s] = 1.0 + hn * b;
            }
    return z;
}

// A pair is read as scheduled when either of its coordinates rises above
// 1 + theta: a pair whose optimal split gives everything to one user keeps the
// other coordinate at exactly 1.
Allocation recover_assignment(const ProblemInstance& inst, const VertexVector& z_star, const LiftedPower& lifted,
                              double theta) {
    const int k = inst.num_users, half = inst.num_subcarriers * k * k;
    if (static_cast<int>(z_star.size()) != 2 * half || static_cast<int>(lifted.size()) != 2 * half)
        throw InvalidInput("recover_assignment: vectors must use the full lifted layout");
    SubcarrierAssignment s(inst.num_subcarriers, k);
    for (int i = 0; i < inst.num_subcarriers; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        std::pair<int, int> arg{-1, -1};
        for (int m = 0; m < k; ++m)
            for (int n = 0; n < k; ++n) {
                int slot = triple_slot(i, m, n, k);
                double u = z_star[slot], v = z_star[half + slot];
                if (!(u > 1.0 + theta || v > 1.0 + theta)) continue;
                if (!sic_valid(inst, i, m, n)) continue;
                double contrib = inst.weight(m) * std::log2(u) + inst.weight(n) * std::log2(v);
                if (contrib > best) {
                    best = contrib;
                    arg = {m, n};
                }
            }
        if (arg.first >= 0) s.set_pair(i, arg.first, arg.second);
    }
    PowerAllocation p = recover(lifted, s);
    double used = scheduled_power(p, s);
    Allocation best = optimize_fixed_assignment(inst, s);
    if (used <= inst.p_max * (1.0 + 1e-12)) {
        double direct = system_throughput(inst, p, s);
        if (direct > best.objective) best = make_allocation(inst, s, std::move(p));
    }
    return best;
}

}  // namespace noma
