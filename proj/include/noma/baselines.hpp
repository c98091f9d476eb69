#pragma once

#include <cstdint>

#include "noma/model.hpp"
#include "noma/polyblock.hpp"

namespace noma {

enum class BaselineKind { oma_optimal, random_pairing };

// Optimal MC-OMA: the exact solver with every m != n pair masked out.
PolyblockResult solve_oma(const ProblemInstance& inst, double epsilon = 1e-3);

// One SIC-valid pair (singletons included) drawn uniformly per subcarrier,
// then optimal powers for that assignment.
Allocation solve_random_pairing(const ProblemInstance& inst, std::uint64_t seed);

}  // namespace noma
