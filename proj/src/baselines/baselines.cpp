#include "noma/baselines.hpp"

#include <random>

#include "noma/sca.hpp"

namespace noma {

PolyblockResult solve_oma(const ProblemInstance& inst, double epsilon) {
    PolyblockOptions opt;
    opt.epsilon = epsilon;
    opt.mask = PairMask::oma_only;
    return solve_optimal(inst, opt);
}

Allocation solve_random_pairing(const ProblemInstance& inst, std::uint64_t seed) {
    inst.validate();
    std::mt19937_64 rng(seed);
    SubcarrierAssignment s(inst.num_subcarriers, inst.num_users);
    for (int i = 0; i < inst.num_subcarriers; ++i) {
        auto pairs = valid_pairs(inst, i);
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        auto idx = static_cast<std::size_t>(u * static_cast<double>(pairs.size()));
        if (idx >= pairs.size()) idx = pairs.size() - 1;
        s.set_pair(i, pairs[idx].first, pairs[idx].second);
    }
    return optimize_fixed_assignment(inst, s);
}

}  // namespace noma
