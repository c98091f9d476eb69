#pragma once

#include <vector>

#include "noma/model.hpp"

namespace noma {

struct OracleConfig {
    int grid_levels = 15;     // points per coordinate in every pass
    int refinement_passes = 12;
    double zoom = 5.0;        // window shrink factor between passes
    int max_subcarriers = 3;
    int max_users = 3;
};

struct OracleResult {
    Allocation allocation;
    double grid_gap = 0.0;    // conservative estimate of the distance to the optimum
    long long evaluations = 0;
};

std::vector<SubcarrierAssignment> enumerate_assignments(const ProblemInstance& inst,
                                                        const OracleConfig& config = {});

// Exhaustive over assignments, refined grid over powers. Every value it
// returns is attained by the returned feasible allocation.
OracleResult brute_force_solve(const ProblemInstance& inst, const OracleConfig& config = {});

}  // namespace noma
