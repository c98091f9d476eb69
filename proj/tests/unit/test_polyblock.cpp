#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "noma/polyblock.hpp"
#include "noma/sca.hpp"

using namespace noma;
using testutil::make_instance;

namespace {

// Values frozen from tests/oracles/projection.py (LP bisection, HiGHS).
constexpr double kLambdaK2Initial = 0.4114378419398152;
constexpr double kLambdaK2Nf2 = 0.6258121822368492;
// Values frozen from tests/oracles/small_optimum.py (enumeration + multistart SLSQP).
#include "frozen_optima.inc"

ProblemInstance instance_c() { return make_instance(2, 2, 2.0, {1.0, 0.6}, {1.0, 4.0, 2.0, 0.5}); }

}  // namespace

TEST_SUITE("polyblock") {

TEST_CASE("initial vertex") {
    VertexVector z = initial_vertex(make_instance(1, 1, 1.0, {1.0}, {1.0}));
    CHECK(z == VertexVector{2.0, 2.0});
    VertexVector z2 = initial_vertex(make_instance(2, 1, 1.0, {1.0, 1.0}, {1.0, 3.0}));
    CHECK(z2 == VertexVector{2, 2, 4, 4, 2, 4, 2, 4});
    for (double v : initial_vertex(make_instance(2, 2, 0.0, {1.0, 1.0}, {1.0, 3.0, 2.0, 5.0}))) CHECK(v == 1.0);
}

TEST_CASE("Dinkelbach LP") {
    ProblemInstance one = make_instance(1, 1, 1.0, {1.0}, {1.0});
    LinearProgram lp = build_dinkelbach_lp(one, {2.0, 2.0}, 0.0);
    CHECK(lp.num_rows() == 3);
    CHECK(lp.num_vars() == 3);
    // tau <= 1 + a + b and tau <= 1 + b with a + b <= 1: best at b = 1.
    LpSolution s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.objective == doctest::Approx(2.0));

    ProblemInstance zero = make_instance(1, 1, 0.0, {1.0}, {1.0});
    LpSolution s0 = solve_lp(build_dinkelbach_lp(zero, {2.0, 3.0}, 0.25));
    CHECK(s0.objective == doctest::Approx(1.0 - 0.25 * 3.0));

    ProblemInstance k3 = make_instance(3, 2, 1.0, {1, 1, 1}, {1, 2, 3, 4, 5, 6});
    LinearProgram big = build_dinkelbach_lp(k3, initial_vertex(k3), 0.1);
    CHECK(big.num_rows() == 2 * 2 * 9 + 1);
    CHECK(big.num_vars() == 2 * 2 * 9 + 1);
    CHECK_THROWS_AS(build_dinkelbach_lp(k3, initial_vertex(k3), -1.0), InvalidInput);
}

TEST_CASE("projection examples") {
    ProblemInstance one = make_instance(1, 1, 1.0, {1.0}, {1.0});
    ProjectionResult r = project(one, {2.0, 2.0});
    CHECK(r.lambda == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(r.phi[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(r.phi[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(r.lifted[1] == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-5));

    ProjectionResult inner = project(one, {1.0, 1.0});
    CHECK(inner.lambda == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

    ProblemInstance zero = make_instance(1, 1, 0.0, {1.0}, {1.0});
    ProjectionResult rz = project(zero, {2.0, 2.0});
    CHECK(rz.lambda == doctest::Approx(0.5));
    CHECK(rz.phi == VertexVector{1.0, 1.0});

    CHECK_THROWS_AS(project(one, {0.5, 2.0}), InvalidInput);
    CHECK_THROWS_AS(project(one, {2.0, 2.0}, 0.0), InvalidInput);
}

TEST_CASE("projection matches the LP-bisection oracle") {
    ProblemInstance a = make_instance(2, 1, 1.0, {1.0, 1.0}, {1.0, 3.0});
    CHECK(project(a, initial_vertex(a)).lambda == doctest::Approx(kLambdaK2Initial).epsilon(1e-6));
    ProblemInstance b = make_instance(2, 2, 2.0, {1.0, 1.0}, {0.5, 2.0, 1.5, 0.8});
    VertexVector z{1.3, 1.7, 2.2, 1.1, 1.9, 1.05, 1.4, 2.5, 1.2, 2.0, 1.6, 1.15, 1.8, 1.3, 1.25, 2.1};
    CHECK(project(b, z).lambda == doctest::Approx(kLambdaK2Nf2).epsilon(1e-6));
}

TEST_CASE("Dinkelbach properties on random vertices") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        ProblemInstance inst = testutil::random_instance(rng, 1 + t % 2, 1 + t % 3, 0.5 + 3 * u(rng), 0.2, 20.0);
        VertexVector z = initial_vertex(inst);
        for (double& v : z) v = 1.0 + (v - 1.0) * (0.05 + 1.2 * u(rng));
        ProjectionResult r = project(inst, z);
        for (std::size_t k = 1; k < r.lambda_trace.size(); ++k) CHECK(r.lambda_trace[k] > r.lambda_trace[k - 1]);
        CHECK(r.dinkelbach_iterations <= 100);
        double zmax = *std::max_element(z.begin(), z.end());
        CHECK(r.residual_trace.back() <= 1e-6);
        CHECK(r.residual_trace.back() >= -1e-6 * (1 + zmax));
        Layout full = full_layout(inst);
        for (std::size_t d = 0; d < z.size(); ++d) {
            CHECK(std::fabs(r.phi[d] - std::max(1.0, r.lambda * z[d])) <= 1e-12 * r.phi[d]);
            double ratio = f_value(inst, full, static_cast<int>(d), r.layout_power) /
                           g_value(inst, full, static_cast<int>(d), r.layout_power);
            CHECK(r.phi[d] <= ratio + 1e-6);
        }
        double used = 0;
        for (double p : r.lifted) used += p;
        CHECK(used <= inst.p_max * (1 + 1e-9) + 1e-12);
        CHECK(r.lambda_upper >= r.lambda);
    }
}

TEST_CASE("children") {
    const double s = std::sqrt(2.0);
    auto c = generate_children({2, 2}, {s, s});
    REQUIRE(c.size() == 2);
    CHECK(c[0] == VertexVector{s, 2});
    CHECK(c[1] == VertexVector{2, s});
    for (const auto& v : generate_children({2, 3}, {2, 3})) CHECK(v == VertexVector{2, 3});
    auto low = generate_children({2, 2}, {1, 1});
    CHECK(low[0] == VertexVector{1, 2});
    CHECK(low[1] == VertexVector{2, 1});
    CHECK_THROWS_AS(generate_children({2, 2}, {3, 1}), InvalidInput);
}

TEST_CASE("best vertex selection") {
    auto cand = [](VertexVector phi) {
        ProjectionResult r;
        r.phi = std::move(phi);
        return Candidate{r.phi, r};
    };
    std::vector<double> mu{1.0};
    CHECK(select_best_vertex(mu, {cand({8.0})}) == 0);
    CHECK(select_best_vertex(mu, {cand({8.0}), cand({std::exp2(2.5)})}) == 0);
    CHECK(select_best_vertex(mu, {cand({4.0}), cand({4.0})}) == 0);
    CHECK(select_best_vertex(mu, {cand({2.0}), cand({4.0})}) == 1);
    CHECK_THROWS_AS(select_best_vertex(mu, {}), InvalidInput);
}

TEST_CASE("assignment recovery") {
    ProblemInstance inst = make_instance(2, 1, 1.0, {1.0, 1.0}, {1.0, 3.0});
    const int half = 4;
    LiftedPower zero(8, 0.0);
    Allocation none = recover_assignment(inst, VertexVector(8, 1.0), zero);
    CHECK_FALSE(none.assignment.pair_on(0).has_value());
    CHECK(none.objective == 0.0);

    VertexVector z(8, 1.0);
    int slot = triple_slot(0, 0, 1, 2);
    z[slot] = 2.0;
    z[half + slot] = 4.0;
    Allocation one = recover_assignment(inst, z, zero);
    REQUIRE(one.assignment.pair_on(0).has_value());
    CHECK(*one.assignment.pair_on(0) == std::make_pair(0, 1));

    VertexVector faint(8, 1.0);
    faint[triple_slot(0, 0, 0, 2)] = 1 + 1e-9;
    faint[triple_slot(0, 1, 1, 2)] = 1 + 1e-9;
    CHECK_FALSE(recover_assignment(inst, faint, zero).assignment.pair_on(0).has_value());

    // Two active pairs on one subcarrier: the larger contribution wins.
    VertexVector two(8, 1.0);
    two[triple_slot(0, 0, 0, 2)] = 1.5;
    two[triple_slot(0, 1, 1, 2)] = 3.0;
    Allocation kept = recover_assignment(inst, two, zero);
    CHECK(*kept.assignment.pair_on(0) == std::make_pair(1, 1));
    CHECK(check_feasible(inst, kept.power, kept.assignment).feasible());
}

TEST_CASE("exact solver on small instances") {
    ProblemInstance one = make_instance(1, 1, 1.0, {1.0}, {1.0});
    CHECK(solve_optimal(one).allocation.objective == doctest::Approx(1.0).epsilon(1e-9));

    ProblemInstance a = make_instance(2, 1, 1.0, {1.0, 1.0}, {1.0, 4.0});
    CHECK(solve_optimal(a).allocation.objective == doctest::Approx(kOptimumA).epsilon(1e-7));
    ProblemInstance b = make_instance(2, 1, 1.0, {1.0, 0.5}, {1.0, 4.0});
    CHECK(solve_optimal(b).allocation.objective == doctest::Approx(kOptimumB).epsilon(1e-7));
    CHECK(solve_optimal(instance_c()).allocation.objective == doctest::Approx(kOptimumC).epsilon(1e-7));
    ProblemInstance d = make_instance(3, 2, 3.0, {1.0, 0.7, 0.4}, {0.8, 2.5, 6.0, 3.0, 1.2, 0.4});
    CHECK(solve_optimal(d).allocation.objective == doctest::Approx(kOptimumD).epsilon(1e-7));
    ProblemInstance e = make_instance(3, 3, 0.5, {0.9, 0.5, 1.0},
                                      {50, 400, 1200, 900, 30, 200, 10, 700, 80});
    CHECK(solve_optimal(e).allocation.objective == doctest::Approx(kOptimumE).epsilon(1e-7));
}

TEST_CASE("lifted face engine agrees with the subcarrier engine") {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 6; ++t) {
        ProblemInstance inst = testutil::random_instance(rng, 2, 1 + t % 2, 1.0, 0.3, 5.0);
        PolyblockOptions lifted;
        lifted.space = PolyblockSpace::lifted;
        PolyblockResult a = solve_optimal(inst);
        PolyblockResult b = solve_optimal(inst, lifted);
        // Two-subcarrier faces are four dimensional and may exhaust the default cap.
        if (inst.num_subcarriers == 1 || b.iterations < lifted.max_iterations) CHECK(b.closed);
        CHECK(b.upper_bound >= b.allocation.objective);
        CHECK(std::fabs(a.allocation.objective - b.allocation.objective) <= 1e-2);
        CHECK(b.upper_bound >= a.allocation.objective - 1e-9);
    }
}

TEST_CASE("sandwich, nesting and trace") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 20; ++t) {
        ProblemInstance inst = testutil::random_instance(rng, 2 + t % 2, 2 + t % 2, 0.1 + 5.0 * (t % 3), 1.0, 1e4);
        std::ostringstream trace;
        PolyblockOptions opt;
        opt.trace = &trace;
        // Odd runs use the plain corner bound so the vertex loop itself is exercised.
        opt.dual_bound = t % 2 == 0;
        PolyblockResult r = solve_optimal(inst, opt);
        REQUIRE(r.closed);
        if (!opt.dual_bound) CHECK(r.iterations > 0);
        const Allocation& al = r.allocation;
        CHECK(al.objective <= r.upper_bound + 1e-12);
        CHECK(r.upper_bound <= al.objective + r.tolerance + 1e-12);
        CHECK(r.tolerance == doctest::Approx(epsilon_gap(std::vector<double>(inst.num_subcarriers, 1.0), 1e-3)));
        CHECK(r.gap == doctest::Approx(r.upper_bound - al.objective));
        CHECK(check_feasible(inst, al.power, al.assignment).feasible());
        CHECK(al.objective == doctest::Approx(system_throughput(inst, al.power, al.assignment)).epsilon(1e-9));
        for (std::size_t k = 1; k < r.trace.size(); ++k) {
            CHECK(r.trace[k].upper_bound <= r.trace[k - 1].upper_bound + 1e-12);
            CHECK(r.trace[k].incumbent >= r.trace[k - 1].incumbent);
            CHECK(r.trace[k].upper_bound >= r.trace[k].incumbent);
        }
        std::string text = trace.str();
        CHECK(text.rfind("k,vertices,upper_bound,incumbent,selected_gap\n", 0) == 0);
        CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == r.trace.size() + 1);
    }
}

TEST_CASE("iteration cap returns the incumbent flagged open") {
    std::mt19937_64 rng(34);
    ProblemInstance inst = testutil::random_instance(rng, 3, 3, 10.0, 1.0, 1e5);
    PolyblockOptions opt;
    opt.max_iterations = 1;
    opt.dual_bound = false;
    PolyblockResult r = solve_optimal(inst, opt);
    CHECK_FALSE(r.closed);
    CHECK(r.upper_bound >= r.allocation.objective);
    CHECK(check_feasible(inst, r.allocation.power, r.allocation.assignment).feasible());
    CHECK_THROWS_AS(solve_optimal(inst, PolyblockOptions{.epsilon = 0.0}), InvalidInput);
}

TEST_CASE("exchange polish never loses value") {
    std::mt19937_64 rng(35);
    for (int t = 0; t < 30; ++t) {
        ProblemInstance inst = testutil::random_instance(rng, 3, 3, 2.0);
        SubcarrierAssignment s(3, 3);
        for (int i = 0; i < 3; ++i) s.set_pair(i, valid_pairs(inst, i)[0].first, valid_pairs(inst, i)[0].second);
        Allocation start = optimize_fixed_assignment(inst, s);
        Allocation better = exchange_improve(inst, start);
        CHECK(better.objective >= start.objective);
    }
}

}
