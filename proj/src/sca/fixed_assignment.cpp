#include <algorithm>
#include <cmath>

#include "noma/sca.hpp"

namespace noma {

std::vector<double> water_fill(const std::vector<const PairCurve*>& curves, double budget) {
    std::vector<double> q(curves.size(), 0.0);
    if (curves.empty() || !(budget > 0.0)) return q;
    double hi = 0.0;
    for (const PairCurve* c : curves) hi = std::max(hi, c->slope(0.0));
    if (!(hi > 0.0)) return q;

    auto total = [&](double nu) {
        double t = 0.0;
        for (const PairCurve* c : curves) t += c->power_for_slope(nu);
        return t;
    };
    double lo = hi;
    for (int it = 0; it < 4000 && total(lo) < budget; ++it) lo *= 0.5;
    for (int it = 0; it < 200 && hi > lo * (1.0 + 1e-15); ++it) {
        double mid = std::sqrt(lo * hi);
        if (total(mid) >= budget)
            lo = mid;
        else
            hi = mid;
    }
    for (std::size_t k = 0; k < curves.size(); ++k) q[k] = curves[k]->power_for_slope(hi);
    double used = 0.0;
    for (double v : q) used += v;
    if (used > budget) {
        double f = budget / used;
        for (double& v : q) v *= f;
    }
    return q;
}

Allocation optimize_fixed_assignment(const ProblemInstance& inst, const SubcarrierAssignment& assignment) {
    std::vector<PairCurve> curves;
    std::vector<int> sub;
    for (int i = 0; i < inst.num_subcarriers; ++i) {
        int active = 0;
        for (int m = 0; m < inst.num_users; ++m)
            for (int n = 0; n < inst.num_users; ++n) {
                if (!assignment.at(i, m, n)) continue;
                if (++active > 1) throw InvalidInput("optimize_fixed_assignment: C3 violated");
                curves.emplace_back(inst, i, m, n);
                sub.push_back(i);
            }
    }
    std::vector<const PairCurve*> ptrs;
    for (const PairCurve& c : curves) ptrs.push_back(&c);
    std::vector<double> q = water_fill(ptrs, inst.p_max);

    PowerAllocation power(inst.num_subcarriers, inst.num_users);
    for (std::size_t k = 0; k < curves.size(); ++k) {
        auto [pm, pn] = curves[k].split(q[k]);
        power.at(sub[k], curves[k].m()) = pm;
        if (curves[k].m() != curves[k].n()) power.at(sub[k], curves[k].n()) = pn;
    }
    return make_allocation(inst, assignment, std::move(power));
}

}  // namespace noma
