#pragma once

#include <random>
#include <vector>

#include "noma/model.hpp"

namespace testutil {

inline noma::ProblemInstance make_instance(int k, int nf, double p, std::vector<double> w,
                                           std::vector<double> gains) {
    noma::ProblemInstance inst;
    inst.num_users = k;
    inst.num_subcarriers = nf;
    inst.p_max = p;
    inst.weights = std::move(w);
    inst.gains = std::move(gains);
    inst.validate();
    return inst;
}

// Gains log-uniform over [lo, hi], weights uniform in [0.1, 1].
inline noma::ProblemInstance random_instance(std::mt19937_64& rng, int k, int nf, double p, double lo = 0.1,
                                             double hi = 100.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(k), g(static_cast<std::size_t>(k) * nf);
    for (double& x : w) x = 0.1 + 0.9 * u(rng);
    for (double& x : g) x = lo * std::pow(hi / lo, u(rng));
    return make_instance(k, nf, p, w, g);
}

}  // namespace testutil
