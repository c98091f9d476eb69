#include <doctest.h>

#include <cmath>
#include <random>

#include "noma/solvers.hpp"

using namespace noma;

namespace {

LinearProgram box_lp(int n) { return LinearProgram(n); }

// Optimum of max c.x over {A x <= b, x >= 0} (three variables) by enumerating
// every vertex as the solution of three active constraints.
double enumerate_vertices(const LinearProgram& lp) {
    std::vector<Vec> a = lp.rows;
    Vec b = lp.rhs;
    for (int j = 0; j < 3; ++j) {
        Vec r(3, 0.0);
        r[j] = -1.0;
        a.push_back(r);
        b.push_back(0.0);
    }
    double best = -std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(a.size());
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q)
            for (int r = q + 1; r < n; ++r) {
                double m[3][4];
                int idx[3] = {p, q, r};
                for (int i = 0; i < 3; ++i) {
                    for (int j = 0; j < 3; ++j) m[i][j] = a[idx[i]][j];
                    m[i][3] = b[idx[i]];
                }
                bool singular = false;
                for (int c = 0; c < 3 && !singular; ++c) {
                    int piv = c;
                    for (int i = c + 1; i < 3; ++i)
                        if (std::fabs(m[i][c]) > std::fabs(m[piv][c])) piv = i;
                    if (std::fabs(m[piv][c]) < 1e-12) {
                        singular = true;
                        break;
                    }
                    for (int j = 0; j < 4; ++j) std::swap(m[c][j], m[piv][j]);
                    for (int i = 0; i < 3; ++i) {
                        if (i == c) continue;
                        double f = m[i][c] / m[c][c];
                        for (int j = 0; j < 4; ++j) m[i][j] -= f * m[c][j];
                    }
                }
                if (singular) continue;
                Vec x(3);
                for (int i = 0; i < 3; ++i) x[i] = m[i][3] / m[i][i];
                bool ok = true;
                for (int i = 0; i < n && ok; ++i) {
                    double lhs = a[i][0] * x[0] + a[i][1] * x[1] + a[i][2] * x[2];
                    if (lhs > b[i] + 1e-9) ok = false;
                }
                if (ok) best = std::max(best, lp.objective[0] * x[0] + lp.objective[1] * x[1] + lp.objective[2] * x[2]);
            }
    return best;
}

}  // namespace

TEST_SUITE("solvers") {

TEST_CASE("small LPs") {
    LinearProgram a = box_lp(2);
    a.objective = {1, 1};
    a.add_row({1, 1}, 1);
    LpSolution sa = solve_lp(a);
    REQUIRE(sa.status == LpStatus::optimal);
    CHECK(sa.objective == doctest::Approx(1.0));

    LinearProgram b = box_lp(1);
    b.objective = {1};
    b.add_row({1}, 0);
    LpSolution sb = solve_lp(b);
    REQUIRE(sb.status == LpStatus::optimal);
    CHECK(sb.objective == doctest::Approx(0.0));

    // maximize tau s.t. tau <= 2 - x, tau <= x, 0 <= x <= 2, tau free
    LinearProgram c = box_lp(2);
    c.objective = {0, 1};
    c.lower[1] = -std::numeric_limits<double>::infinity();
    c.upper[0] = 2;
    c.add_row({1, 1}, 2);
    c.add_row({-1, 1}, 0);
    LpSolution sc = solve_lp(c);
    REQUIRE(sc.status == LpStatus::optimal);
    CHECK(sc.objective == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sc.x[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("infeasible and unbounded") {
    LinearProgram inf = box_lp(1);
    inf.objective = {1};
    inf.add_row({-1}, -2);
    inf.add_row({1}, 1);
    CHECK(solve_lp(inf).status == LpStatus::infeasible);

    LinearProgram unb = box_lp(2);
    unb.objective = {1, 0};
    unb.add_row({0, 1}, 1);
    CHECK(solve_lp(unb).status == LpStatus::unbounded);
}

TEST_CASE("random LPs agree with vertex enumeration") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 300; ++t) {
        LinearProgram lp(3);
        for (double& c : lp.objective) c = u(rng);
        int rows = 2 + static_cast<int>(rng() % 4);
        for (int r = 0; r < rows; ++r) lp.add_row({u(rng), u(rng), u(rng)}, 0.2 + std::fabs(u(rng)));
        lp.add_row({1, 1, 1}, 3.0);  // keeps the region bounded
        LpSolution s = solve_lp(lp);
        REQUIRE(s.status == LpStatus::optimal);
        CHECK(s.objective == doctest::Approx(enumerate_vertices(lp)).epsilon(1e-8));
        CHECK(max_violation(lp, s.x) <= 1e-8);
        double cx = 0;
        for (int j = 0; j < 3; ++j) cx += lp.objective[j] * s.x[j];
        CHECK(cx == doctest::Approx(s.objective).epsilon(1e-9));
    }
}

TEST_CASE("degenerate LP terminates") {
    // Many redundant constraints through one vertex.
    LinearProgram lp(3);
    lp.objective = {1, 1, 1};
    for (int k = 1; k <= 30; ++k) lp.add_row({1.0 * k, 1.0, 1.0}, 1.0 * k + 2.0);
    lp.add_row({1, 1, 1}, 3);
    LpSolution s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.objective == doctest::Approx(3.0));
}

TEST_CASE("reoptimize warm start matches a cold solve") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LinearProgram lp(4);
    for (int r = 0; r < 6; ++r) lp.add_row({u(rng), u(rng), u(rng), u(rng)}, 1.0);
    lp.add_row({1, 1, 1, 1}, 2.0);
    SimplexSolver warm(lp);
    for (int t = 0; t < 50; ++t) {
        Vec c{u(rng), u(rng), u(rng), u(rng)};
        LinearProgram cold = lp;
        cold.objective = c;
        CHECK(warm.reoptimize(c).objective == doctest::Approx(solve_lp(cold).objective).epsilon(1e-9));
    }
}

TEST_CASE("determinism") {
    LinearProgram lp(3);
    lp.objective = {1, 2, 3};
    lp.add_row({1, 1, 1}, 1);
    lp.add_row({1, 2, 0}, 1);
    LpSolution a = solve_lp(lp), b = solve_lp(lp);
    CHECK(a.x == b.x);
    CHECK(a.objective == b.objective);
}

TEST_CASE("Frank-Wolfe examples") {
    LinearProgram unit(1);
    unit.upper[0] = 1;
    ConvexSubproblem p1{[](const Vec& x) { return (x[0] - 0.25) * (x[0] - 0.25); },
                        [](const Vec& x) { return Vec{2 * (x[0] - 0.25)}; }, unit};
    ConvexResult r1 = minimize_convex(p1, {1.0});
    CHECK(r1.x[0] == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(r1.value <= 1e-6);

    ConvexSubproblem p2{[](const Vec& x) { return -std::log2(1 + x[0]); },
                        [](const Vec& x) { return Vec{-1 / ((1 + x[0]) * std::log(2.0))}; }, unit};
    ConvexResult r2 = minimize_convex(p2, {0.0});
    CHECK(r2.x[0] == doctest::Approx(1.0));
    CHECK(r2.value == doctest::Approx(-1.0));

    LinearProgram simplex(2);
    simplex.add_row({1, 1}, 1);
    ConvexSubproblem p3{[](const Vec& x) { return (x[0] - 1) * (x[0] - 1) + (x[1] - 1) * (x[1] - 1); },
                        [](const Vec& x) { return Vec{2 * (x[0] - 1), 2 * (x[1] - 1)}; }, simplex};
    ConvexResult r3 = minimize_convex(p3, {0.0, 0.0});
    CHECK(r3.x[0] == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(r3.x[1] == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(r3.value == doctest::Approx(0.5).epsilon(1e-5));
    // The reported gap bounds the distance to the optimum.
    CHECK(r3.value - 0.5 <= r3.gap + 1e-12);
}

TEST_CASE("Frank-Wolfe gap bounds suboptimality on random quadratics") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        // minimize |x - c|^2 over the box [0,1]^3; optimum is the clipped c.
        Vec c{2 * u(rng) - 0.5, 2 * u(rng) - 0.5, 2 * u(rng) - 0.5};
        LinearProgram box(3);
        for (double& x : box.upper) x = 1.0;
        ConvexSubproblem p{[c](const Vec& x) {
                               double s = 0;
                               for (int j = 0; j < 3; ++j) s += (x[j] - c[j]) * (x[j] - c[j]);
                               return s;
                           },
                           [c](const Vec& x) {
                               Vec g(3);
                               for (int j = 0; j < 3; ++j) g[j] = 2 * (x[j] - c[j]);
                               return g;
                           },
                           box};
        ConvexResult r = minimize_convex(p, {0.5, 0.5, 0.5});
        double opt = 0;
        for (int j = 0; j < 3; ++j) {
            double x = std::clamp(c[j], 0.0, 1.0);
            opt += (x - c[j]) * (x - c[j]);
        }
        CHECK(r.value - opt <= r.gap + 1e-12);
        CHECK(r.value >= opt - 1e-12);
    }
}

TEST_CASE("Frank-Wolfe errors") {
    LinearProgram unit(1);
    unit.upper[0] = 1;
    ConvexSubproblem p{[](const Vec& x) { return x[0]; }, [](const Vec&) { return Vec{1.0}; }, unit};
    CHECK_THROWS_AS(minimize_convex(p, {2.0}), std::invalid_argument);
    ConvexSubproblem bad{[](const Vec&) { return std::nan(""); }, [](const Vec&) { return Vec{1.0}; }, unit};
    CHECK_THROWS_AS(minimize_convex(bad, {0.5}), SolverFailure);
}

}
