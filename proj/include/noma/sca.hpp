#pragma once

#include <optional>
#include <vector>

#include "noma/model.hpp"
#include "noma/pair_curve.hpp"
#include "noma/solvers.hpp"

namespace noma {

// Optimal powers for a fixed binary assignment. Each scheduled subcarrier
// contributes a concave PairCurve of its budget, so the problem is a
// water-filling over those curves; the level is found by bisection.
Allocation optimize_fixed_assignment(const ProblemInstance& inst, const SubcarrierAssignment& assignment);

// Water levels for a set of concave curves sharing a budget: returns q per curve.
std::vector<double> water_fill(const std::vector<const PairCurve*>& curves, double budget);

struct RelaxedPoint {
    LiftedPower lifted;          // 2 * N_F * K^2
    std::vector<double> s;       // N_F * K * K, same (i,m,n) order as the lifted halves
    std::vector<double> p_aux;   // N_F * K, the auxiliary p_m^i of the big-M rows
};

struct ScaConfig {
    std::optional<double> eta;  // default_eta(instance) when empty
    int max_iterations = 50;
    double objective_tolerance = 1e-5;
    double inner_tolerance = 1e-6;
    int inner_max_iterations = 200;  // each inner solve only has to improve the surrogate
    PairMask mask = PairMask::all;
};

double default_eta(const ProblemInstance& inst);

double eval_F(const ProblemInstance& inst, const LiftedPower& lifted);
double eval_G(const ProblemInstance& inst, const LiftedPower& lifted);
double eval_H(const std::vector<double>& s);
double eval_M(const std::vector<double>& s);
LiftedPower grad_G(const ProblemInstance& inst, const LiftedPower& lifted_ref);
std::vector<double> grad_M(const std::vector<double>& s_ref);

// F - G + eta (H - M)
double penalized_objective(const ProblemInstance& inst, const RelaxedPoint& point, double eta);

// Maps RelaxedPoint to and from the compact variable vector used by the
// subproblem: (a, b, s) per SIC-valid triple followed by p_m^i per (i, m).
class ScaLayout {
public:
    ScaLayout(const ProblemInstance& inst, PairMask mask);

    int num_vars() const { return num_vars_; }
    Vec pack(const RelaxedPoint& point) const;
    RelaxedPoint unpack(const Vec& x) const;
    // C1, C2b, C3, C5-C8 over the compact variables.
    LinearProgram polytope() const;

    struct Triple {
        int i, m, n;
        int a, b, s;  // variable indices
    };
    const std::vector<Triple>& triples() const { return triples_; }
    int p_index(int i, int m) const { return p_base_ + i * inst_->num_users + m; }

private:
    const ProblemInstance* inst_;
    std::vector<Triple> triples_;
    int p_base_ = 0;
    int num_vars_ = 0;
};

// Feasibility of a relaxed point for C1, C2b, C3, C5-C8 (largest violation).
double relaxed_violation(const ProblemInstance& inst, const RelaxedPoint& point, PairMask mask = PairMask::all);

ConvexSubproblem build_sca_subproblem(const ProblemInstance& inst, const RelaxedPoint& point_k,
                                      const ScaConfig& config);

SubcarrierAssignment round_assignment(const ProblemInstance& inst, const std::vector<double>& s_relaxed);

// Greedy starting point: on every subcarrier the pair with the best rate at an
// equal budget share is switched on, with that share split evenly between its
// two slots.
RelaxedPoint initial_point(const ProblemInstance& inst, PairMask mask = PairMask::all);

struct ScaIterate {
    int k = 0;
    double penalized = 0.0;
    double max_binary_deviation = 0.0;
    double inner_gap = 0.0;
};

struct ScaResult {
    Allocation allocation;
    RelaxedPoint terminal;
    std::vector<ScaIterate> trace;  // trace[0] is the starting point
    double eta = 0.0;
    int iterations = 0;
    double max_binary_deviation = 0.0;
};

ScaResult solve_sca(const ProblemInstance& inst, const ScaConfig& config = {});

}  // namespace noma
