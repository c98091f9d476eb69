#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "noma/model.hpp"
#include "noma/solvers.hpp"

namespace noma {

using VertexVector = std::vector<double>;

// An ordered support of lifted coordinates. Coordinate t < T is u of
// triples[t], coordinate T + t is v of triples[t]; the p~ variables follow the
// same order (a_t then b_t).
struct Triple {
    int i = 0, m = 0, n = 0;
};

struct Layout {
    std::vector<Triple> triples;
    int dim() const { return 2 * static_cast<int>(triples.size()); }
};

// All N_F K^2 triples in delta order; its coordinates are the full z vector.
Layout full_layout(const ProblemInstance& inst);
// One triple per subcarrier; subcarriers given (-1, -1) are left out.
Layout face_layout(const std::vector<std::pair<int, int>>& pairs);

std::vector<double> layout_weights(const ProblemInstance& inst, const Layout& layout);
VertexVector initial_vertex(const ProblemInstance& inst);
VertexVector initial_vertex(const ProblemInstance& inst, const Layout& layout);

// f_d and g_d of coordinate d at compact p~ (a_t..., b_t...).
double f_value(const ProblemInstance& inst, const Layout& layout, int d, const Vec& p);
double g_value(const ProblemInstance& inst, const Layout& layout, int d, const Vec& p);

// Variables (p~, tau): maximize tau s.t. f_d - lambda z_d g_d >= tau, sum p~ <= P.
LinearProgram build_dinkelbach_lp(const ProblemInstance& inst, const VertexVector& z, double lambda_n);
LinearProgram build_dinkelbach_lp(const ProblemInstance& inst, const Layout& layout, const VertexVector& z,
                                  double lambda_n);

struct ProjectionResult {
    double lambda = 0.0;
    double lambda_upper = 0.0;  // certified bound on the exact projection factor
    VertexVector phi;           // max(1, lambda z)
    LiftedPower lifted;         // full length 2 N_F K^2
    Vec layout_power;           // same power on the layout's compact variables
    int dinkelbach_iterations = 0;
    std::vector<double> lambda_trace;
    std::vector<double> residual_trace;  // optimal tau of each LP
};

class ProjectionError : public SolverFailure {
public:
    ProjectionError(const std::string& what, std::vector<double> trace)
        : SolverFailure(what), lambda_trace(std::move(trace)) {}
    std::vector<double> lambda_trace;
};

ProjectionResult project(const ProblemInstance& inst, const VertexVector& z, double delta = 1e-6,
                         int max_iterations = 100);
ProjectionResult project(const ProblemInstance& inst, const Layout& layout, const VertexVector& z,
                         double delta = 1e-6, int max_iterations = 100);

std::vector<VertexVector> generate_children(const VertexVector& z, const VertexVector& phi);

using Candidate = std::pair<VertexVector, ProjectionResult>;
int select_best_vertex(const ProblemInstance& inst, const std::vector<Candidate>& candidates);
int select_best_vertex(const std::vector<double>& mu, const std::vector<Candidate>& candidates);

// u, v of every triple in the full layout at the given lifted power.
VertexVector lifted_point(const ProblemInstance& inst, const LiftedPower& lifted);

Allocation recover_assignment(const ProblemInstance& inst, const VertexVector& z_star, const LiftedPower& lifted,
                              double theta = 1e-6);

// subcarrier: N_F-dimensional program in x_i = 2^(weighted rate on subcarrier i),
//             projected by an exact level search over per-subcarrier minimum powers.
// lifted:     the (u, v) program restricted to one pair per subcarrier (a face),
//             one polyblock region per face, projected by the Dinkelbach LP loop.
enum class PolyblockSpace { subcarrier, lifted };

struct PolyblockOptions {
    double epsilon = 1e-3;
    int max_iterations = 10000;
    PolyblockSpace space = PolyblockSpace::subcarrier;
    PairMask mask = PairMask::all;
    double dinkelbach_delta = 1e-6;
    bool dual_bound = true;  // subcarrier space: tighten vertex bounds with the budget dual
    std::ostream* trace = nullptr;  // CSV: k,vertices,upper_bound,incumbent,selected_gap
};

struct PolyblockIterate {
    int k = 0;
    std::size_t vertices = 0;
    double upper_bound = 0.0;
    double incumbent = 0.0;
    double selected_gap = 0.0;
};

struct PolyblockResult {
    Allocation allocation;
    double upper_bound = 0.0;
    double gap = 0.0;           // upper_bound - objective, >= 0
    double relative_gap = 0.0;
    double tolerance = 0.0;     // the closure gap implied by epsilon
    bool closed = false;
    int iterations = 0;
    std::size_t peak_vertices = 0;
    std::vector<PolyblockIterate> trace;
};

PolyblockResult solve_optimal(const ProblemInstance& inst, const PolyblockOptions& options = {});

// Closure gap implied by epsilon for coordinates with weights mu.
double epsilon_gap(const std::vector<double>& mu, double epsilon);

// Best allocation reachable from the given one by repeatedly changing the
// pair of a single subcarrier (powers re-optimized for every candidate).
Allocation exchange_improve(const ProblemInstance& inst, Allocation start, PairMask mask = PairMask::all);

}  // namespace noma
