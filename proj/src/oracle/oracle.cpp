#include "noma/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace noma {

namespace {

void check_caps(const ProblemInstance& inst, const OracleConfig& c) {
    inst.validate();
    if (inst.num_subcarriers > c.max_subcarriers || inst.num_users > c.max_users)
        throw InvalidInput("oracle: instance exceeds the size caps");
    if (c.grid_levels < 2 || c.refinement_passes < 1 || !(c.zoom > 1.0))
        throw InvalidInput("oracle: invalid grid configuration");
}

// Window of the given width centred on x, shifted to stay inside [0, hi].
std::pair<double, double> window(double x, double width, double hi) {
    double lo = std::max(0.0, x - 0.5 * width);
    double up = std::min(hi, lo + width);
    lo = std::max(0.0, up - width);
    return {lo, up};
}

struct Slot {
    int i, m, n;
};

// Best rate of one scheduled subcarrier at budget q: the weak user's share is
// searched on a zooming grid.
struct SplitSearch {
    const ProblemInstance& inst;
    const OracleConfig& cfg;
    long long& evals;
    std::map<std::pair<int, double>, std::pair<double, double>> cache;

    double rate(const Slot& s, double q, double pn) const {
        ++evals;
        if (s.m == s.n) return oma_rate(inst.gain(s.i, s.m), q, inst.weight(s.m));
        return pair_rate(inst.gain(s.i, s.m), inst.gain(s.i, s.n), q - pn, pn, inst.weight(s.m),
                         inst.weight(s.n));
    }

    std::pair<double, double> best(const Slot& s, double q) {
        if (s.m == s.n || q <= 0.0) return {rate(s, q, q), q};
        auto key = std::make_pair(triple_slot(s.i, s.m, s.n, inst.num_users), q);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        double best_pn = 0.0, best_v = rate(s, q, 0.0);
        double width = q;
        for (int pass = 0; pass < cfg.refinement_passes; ++pass) {
            auto [lo, hi] = window(best_pn, width, q);
            for (int k = 0; k < cfg.grid_levels; ++k) {
                double pn = k + 1 == cfg.grid_levels ? hi : lo + (hi - lo) * k / (cfg.grid_levels - 1);
                double v = rate(s, q, pn);
                if (v > best_v) {
                    best_v = v;
                    best_pn = pn;
                }
            }
            width /= cfg.zoom;
        }
        return cache[key] = {best_v, best_pn};
    }
};

struct Best {
    double value = -1.0;
    std::vector<double> q;
    std::vector<double> pn;
};

// Budgets of all active slots but the last lie on a zooming grid; the last
// one takes the remainder, since every rate is nondecreasing in its budget.
Best search_budgets(const std::vector<Slot>& slots, const ProblemInstance& inst, const OracleConfig& cfg,
                    SplitSearch& split) {
    const std::size_t a = slots.size();
    const double p = inst.p_max;
    Best best;
    best.q.assign(a, 0.0);
    best.pn.assign(a, 0.0);
    if (a == 0) {
        best.value = 0.0;
        return best;
    }
    const std::size_t free_dims = a - 1;
    // Start from an even split so the first window is centred sensibly.
    std::vector<double> centre(a, p / static_cast<double>(a));
    double width = p;
    for (int pass = 0; pass < cfg.refinement_passes; ++pass) {
        std::vector<std::pair<double, double>> win(free_dims);
        for (std::size_t d = 0; d < free_dims; ++d) win[d] = pass == 0 ? std::pair{0.0, p} : window(centre[d], width, p);
        std::vector<int> idx(free_dims, 0);
        while (true) {
            std::vector<double> q(a);
            double used = 0.0;
            for (std::size_t d = 0; d < free_dims; ++d) {
                auto [lo, hi] = win[d];
                q[d] = idx[d] + 1 == cfg.grid_levels ? hi : lo + (hi - lo) * idx[d] / (cfg.grid_levels - 1);
                used += q[d];
            }
            if (used <= p) {
                q[a - 1] = p - used;
                double total = 0.0;
                std::vector<double> pn(a);
                for (std::size_t d = 0; d < a; ++d) {
                    auto [v, x] = split.best(slots[d], q[d]);
                    total += v;
                    pn[d] = x;
                }
                if (total > best.value) {
                    best.value = total;
                    best.q = q;
                    best.pn = pn;
                }
            }
            std::size_t d = 0;
            while (d < free_dims && ++idx[d] == cfg.grid_levels) idx[d++] = 0;
            if (d == free_dims) break;
        }
        centre = best.q;
        width /= cfg.zoom;
    }
    return best;
}

}  // namespace

std::vector<SubcarrierAssignment> enumerate_assignments(const ProblemInstance& inst, const OracleConfig& config) {
    check_caps(inst, config);
    const int nf = inst.num_subcarriers;
    std::vector<std::vector<std::pair<int, int>>> options(nf);
    std::size_t count = 1;
    for (int i = 0; i < nf; ++i) {
        options[i] = valid_pairs(inst, i);
        count *= options[i].size() + 1;
    }
    std::vector<SubcarrierAssignment> out;
    out.reserve(count);
    std::vector<std::size_t> idx(nf, 0);  // 0 means unassigned
    for (std::size_t c = 0; c < count; ++c) {
        SubcarrierAssignment s(nf, inst.num_users);
        for (int i = 0; i < nf; ++i)
            if (idx[i] > 0) s.set_pair(i, options[i][idx[i] - 1].first, options[i][idx[i] - 1].second);
        out.push_back(std::move(s));
        for (int i = nf - 1; i >= 0; --i) {
            if (++idx[i] <= options[i].size()) break;
            idx[i] = 0;
        }
    }
    return out;
}

OracleResult brute_force_solve(const ProblemInstance& inst, const OracleConfig& config) {
    std::vector<SubcarrierAssignment> all = enumerate_assignments(inst, config);
    OracleResult res;
    double best = -1.0;
    SplitSearch split{inst, config, res.evaluations, {}};
    for (const SubcarrierAssignment& s : all) {
        std::vector<Slot> slots;
        for (int i = 0; i < inst.num_subcarriers; ++i)
            if (auto p = s.pair_on(i)) slots.push_back({i, p->first, p->second});
        Best b = search_budgets(slots, inst, config, split);
        if (b.value > best) {
            best = b.value;
            PowerAllocation power(inst.num_subcarriers, inst.num_users);
            for (std::size_t d = 0; d < slots.size(); ++d) {
                const Slot& sl = slots[d];
                if (sl.m == sl.n) {
                    power.at(sl.i, sl.m) = b.q[d];
                } else {
                    power.at(sl.i, sl.n) = b.pn[d];
                    power.at(sl.i, sl.m) = std::max(0.0, b.q[d] - b.pn[d]);
                }
            }
            res.allocation = make_allocation(inst, s, std::move(power));
        }
    }
    double max_gain = 0.0, max_weight = 0.0;
    for (double h : inst.gains) max_gain = std::max(max_gain, h);
    for (double w : inst.weights) max_weight = std::max(max_weight, w);
    double step = std::pow(config.zoom, -(config.refinement_passes - 1)) / (config.grid_levels - 1);
    res.grid_gap = inst.p_max * step * max_gain * max_weight / std::numbers::ln2;
    return res;
}

}  // namespace noma
