#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "noma/polyblock.hpp"
#include "noma/sca.hpp"
#include "outer_polyblock.hpp"

namespace noma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x_i = 2^(weighted rate of subcarrier i). The set of reachable x is normal and
// lambda z is reachable iff the cheapest pair of every subcarrier can meet its
// target rate within the shared budget, so the projection is a 1-D search.
class SubcarrierRegion : public detail::MonotoneRegion {
public:
    SubcarrierRegion(const ProblemInstance& inst, PairMask mask, bool dual) : inst_(inst), dual_(dual) {
        const int nf = inst.num_subcarriers;
        curves_.resize(nf);
        vmax_.assign(nf, 0.0);
        for (int i = 0; i < nf; ++i) {
            for (auto [m, n] : valid_pairs(inst, i, mask)) {
                curves_[i].emplace_back(inst, i, m, n);
                vmax_[i] = std::max(vmax_[i], curves_[i].back().value(inst.p_max));
            }
        }
    }

    std::vector<double> weights() const override { return std::vector<double>(inst_.num_subcarriers, 1.0); }

    VertexVector initial_vertex() const override {
        VertexVector z(inst_.num_subcarriers);
        for (int i = 0; i < inst_.num_subcarriers; ++i) z[i] = std::exp2(vmax_[i]);
        return z;
    }

    detail::RegionProjection project(const VertexVector& z) override {
        const int nf = inst_.num_subcarriers;
        std::vector<double> lz(nf);
        double y_hi = kInf;
        for (int i = 0; i < nf; ++i) {
            lz[i] = std::log2(z[i]);
            y_hi = std::min(y_hi, vmax_[i] - lz[i]);
        }
        // Every target is nonpositive at lo; some target exceeds its maximum above y_hi.
        double lo = -*std::max_element(lz.begin(), lz.end());
        double hi = std::max(y_hi, lo);
        if (cost(lz, hi) <= inst_.p_max) {
            lo = hi;
        } else {
            while (hi - lo > 1e-12) {
                double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (cost(lz, mid) <= inst_.p_max)
                    lo = mid;
                else
                    hi = mid;
            }
        }
        detail::RegionProjection out;
        out.lambda_lower = std::exp2(lo);
        out.lambda_upper = std::exp2(hi);
        out.candidate = candidate(lz, lo);
        return out;
    }

    // Points worth keeping have sum log2 x >= gamma, which bounds every coordinate
    // from below; the budget left after those lower bounds caps each one from above.
    bool reduce(VertexVector& z, double gamma) const override {
        const int nf = inst_.num_subcarriers;
        std::vector<double> lz(nf), floor_cost(nf);
        for (int i = 0; i < nf; ++i) lz[i] = std::log2(z[i]);
        for (int round = 0; round < 4; ++round) {
            double sum = 0.0;
            for (double v : lz) sum += v;
            double total = 0.0;
            for (int i = 0; i < nf; ++i) {
                double lower = gamma - (sum - lz[i]);
                if (lower > lz[i]) return false;
                floor_cost[i] = lower > 0.0 ? min_cost(i, lower) : 0.0;
                total += floor_cost[i];
            }
            if (!(total <= inst_.p_max)) return false;
            bool moved = false;
            for (int i = 0; i < nf; ++i) {
                double cap = max_rate(i, inst_.p_max - (total - floor_cost[i]));
                if (cap < lz[i] - 1e-12 * (1.0 + lz[i])) {
                    lz[i] = cap;
                    moved = true;
                }
            }
            if (!moved) break;
        }
        for (int i = 0; i < nf; ++i) z[i] = std::max(1.0, std::min(z[i], std::exp2(lz[i])));
        return true;
    }

    // Lagrangian dual of the budget: for any nu >= 0,
    // nu P + sum_i max_pair max_q (min(rate(q), log2 z_i) - nu q) bounds [1, z].
    double bound(const VertexVector& z, double corner) const override {
        if (!dual_) return corner;
        const int nf = inst_.num_subcarriers;
        const double pmax = inst_.p_max;
        std::vector<double> lz(nf);
        std::vector<std::vector<double>> qcap(nf);
        double nu_hi = 0.0;
        for (int i = 0; i < nf; ++i) {
            lz[i] = std::log2(z[i]);
            for (const PairCurve& c : curves_[i]) {
                qcap[i].push_back(std::min(pmax, c.min_power(lz[i])));
                nu_hi = std::max(nu_hi, c.slope(0.0));
            }
        }
        auto dual = [&](double nu) {
            double total = nu * pmax;
            for (int i = 0; i < nf; ++i) {
                double best = 0.0;
                for (std::size_t c = 0; c < curves_[i].size(); ++c) {
                    const PairCurve& pc = curves_[i][c];
                    double q = nu > 0.0 ? std::min(pc.power_for_slope(nu), qcap[i][c]) : qcap[i][c];
                    best = std::max(best, std::min(pc.value(q), lz[i]) - nu * q);
                }
                total += best;
            }
            return total;
        };
        double best = std::min(corner, dual(0.0));
        if (!(nu_hi > 0.0) || !(pmax > 0.0)) return best;
        // The dual is convex in nu; golden-section search, every probe is a valid bound.
        const double r = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = 0.0, b = nu_hi;
        double c = b - r * (b - a), d = a + r * (b - a);
        double fc = dual(c), fd = dual(d);
        for (int it = 0; it < 80; ++it) {
            if (fc <= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = dual(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = dual(d);
            }
            best = std::min({best, fc, fd});
        }
        return best;
    }

private:
    double min_cost(int i, double rate) const {
        double best = kInf;
        for (const PairCurve& c : curves_[i]) best = std::min(best, c.min_power(rate));
        return best;
    }

    double max_rate(int i, double budget) const {
        double best = 0.0;
        for (const PairCurve& c : curves_[i]) best = std::max(best, c.value(std::max(0.0, budget)));
        return best;
    }

    double cost(const std::vector<double>& lz, double y) const {
        double total = 0.0;
        for (int i = 0; i < inst_.num_subcarriers; ++i) {
            double target = y + lz[i];
            if (target <= 0.0) continue;
            double best = kInf;
            for (const PairCurve& c : curves_[i]) best = std::min(best, c.min_power(target));
            total += best;
            if (!(total <= inst_.p_max)) return kInf;
        }
        return total;
    }

    Allocation candidate(const std::vector<double>& lz, double y) {
        std::vector<int> choice(inst_.num_subcarriers, -1);
        for (int i = 0; i < inst_.num_subcarriers; ++i) {
            double target = y + lz[i];
            if (target <= 0.0) continue;
            double best = kInf;
            for (std::size_t c = 0; c < curves_[i].size(); ++c) {
                double q = curves_[i][c].min_power(target);
                if (q < best) {
                    best = q;
                    choice[i] = static_cast<int>(c);
                }
            }
        }
        auto it = cache_.find(choice);
        if (it != cache_.end()) return it->second;
        SubcarrierAssignment s(inst_.num_subcarriers, inst_.num_users);
        for (int i = 0; i < inst_.num_subcarriers; ++i)
            if (choice[i] >= 0) s.set_pair(i, curves_[i][choice[i]].m(), curves_[i][choice[i]].n());
        Allocation a = optimize_fixed_assignment(inst_, s);
        cache_.emplace(choice, a);
        return a;
    }

    const ProblemInstance& inst_;
    std::vector<std::vector<PairCurve>> curves_;
    std::vector<double> vmax_;
    std::map<std::vector<int>, Allocation> cache_;
    bool dual_;
};

// The lifted (u, v) program restricted to one pair per subcarrier.
class LiftedFaceRegion : public detail::MonotoneRegion {
public:
    LiftedFaceRegion(const ProblemInstance& inst, const std::vector<std::pair<int, int>>& pairs, double delta)
        : inst_(inst), layout_(face_layout(pairs)), delta_(delta) {}

    std::vector<double> weights() const override { return layout_weights(inst_, layout_); }
    // On a single-user pair only u v matters and (u v, 1) is attainable with
    // b = 0, so the v coordinate is pinned at 1 instead of tiling the level curve.
    VertexVector initial_vertex() const override {
        VertexVector z = noma::initial_vertex(inst_, layout_);
        const std::size_t t = layout_.triples.size();
        for (std::size_t j = 0; j < t; ++j)
            if (layout_.triples[j].m == layout_.triples[j].n) {
                z[j] = 1.0 + inst_.gain(layout_.triples[j].i, layout_.triples[j].m) * inst_.p_max;
                z[t + j] = 1.0;
            }
        return z;
    }

    detail::RegionProjection project(const VertexVector& z) override {
        ProjectionResult res = noma::project(inst_, layout_, z, delta_);
        const int k = inst_.num_users, half = inst_.num_subcarriers * k * k;
        const int t = static_cast<int>(layout_.triples.size());
        VertexVector full(2 * static_cast<std::size_t>(half), 1.0);
        for (int j = 0; j < t; ++j) {
            const Triple& tr = layout_.triples[j];
            int slot = triple_slot(tr.i, tr.m, tr.n, k);
            full[slot] = res.phi[j];
            full[half + slot] = res.phi[t + j];
        }
        detail::RegionProjection out;
        out.lambda_lower = res.lambda;
        out.lambda_upper = res.lambda_upper;
        out.candidate = recover_assignment(inst_, full, res.lifted);
        return out;
    }

private:
    const ProblemInstance& inst_;
    Layout layout_;
    double delta_;
};

constexpr std::size_t kMaxFaces = 100000;

std::vector<std::unique_ptr<detail::MonotoneRegion>> face_regions(const ProblemInstance& inst, PairMask mask,
                                                                  double delta) {
    const int nf = inst.num_subcarriers;
    std::vector<std::vector<std::pair<int, int>>> options(nf);
    std::size_t faces = 1;
    for (int i = 0; i < nf; ++i) {
        options[i] = valid_pairs(inst, i, mask);
        if (options[i].empty()) options[i].push_back({-1, -1});
        faces *= options[i].size();
        if (faces > kMaxFaces) throw InvalidInput("solve_optimal: too many faces for the lifted space");
    }
    std::vector<std::unique_ptr<detail::MonotoneRegion>> regions;
    std::vector<std::size_t> idx(nf, 0);
    for (std::size_t f = 0; f < faces; ++f) {
        std::vector<std::pair<int, int>> pairs(nf);
        for (int i = 0; i < nf; ++i) pairs[i] = options[i][idx[i]];
        regions.push_back(std::make_unique<LiftedFaceRegion>(inst, pairs, delta));
        for (int i = nf - 1; i >= 0; --i) {
            if (++idx[i] < options[i].size()) break;
            idx[i] = 0;
        }
    }
    return regions;
}

bool respects_mask(const SubcarrierAssignment& s, PairMask mask) {
    if (mask == PairMask::all) return true;
    for (int i = 0; i < s.num_subcarriers; ++i) {
        auto p = s.pair_on(i);
        if (p && p->first != p->second) return false;
    }
    return true;
}

}  // namespace

Allocation exchange_improve(const ProblemInstance& inst, Allocation start, PairMask mask) {
    const int nf = inst.num_subcarriers;
    std::vector<std::vector<std::pair<int, int>>> options(nf);
    for (int i = 0; i < nf; ++i) options[i] = valid_pairs(inst, i, mask);
    Allocation best = std::move(start);
    for (int pass = 0; pass < 100; ++pass) {
        bool improved = false;
        for (int i = 0; i < nf; ++i) {
            auto current = best.assignment.pair_on(i);
            Allocation best_here = best;
            for (int o = -1; o < static_cast<int>(options[i].size()); ++o) {
                SubcarrierAssignment s = best.assignment;
                s.clear(i);
                if (o >= 0) {
                    if (current && *current == options[i][o]) continue;
                    s.set_pair(i, options[i][o].first, options[i][o].second);
                } else if (!current) {
                    continue;
                }
                Allocation trial = optimize_fixed_assignment(inst, s);
                if (trial.objective > best_here.objective + 1e-12) best_here = std::move(trial);
            }
            if (best_here.objective > best.objective) {
                best = std::move(best_here);
                improved = true;
            }
        }
        if (!improved) break;
    }
    return best;
}

PolyblockResult solve_optimal(const ProblemInstance& inst, const PolyblockOptions& options) {
    inst.validate();
    if (!(options.epsilon > 0.0) || !(options.epsilon < 1.0))
        throw InvalidInput("solve_optimal: epsilon must lie in (0, 1)");
    if (options.max_iterations < 1) throw InvalidInput("solve_optimal: max_iterations must be positive");

    RelaxedPoint start = initial_point(inst, options.mask);
    Allocation seed = exchange_improve(inst, optimize_fixed_assignment(inst, round_assignment(inst, start.s)),
                                       options.mask);

    std::vector<std::unique_ptr<detail::MonotoneRegion>> regions;
    if (options.space == PolyblockSpace::subcarrier)
        regions.push_back(std::make_unique<SubcarrierRegion>(inst, options.mask, options.dual_bound));
    else
        regions = face_regions(inst, options.mask, options.dinkelbach_delta);

    detail::OuterResult outer =
        detail::run_outer_polyblock(regions, std::move(seed), options.epsilon, options.max_iterations, options.trace);

    Allocation best = exchange_improve(inst, std::move(outer.incumbent), options.mask);
    LiftedPower lifted = lift(best.power, best.assignment);
    Allocation recovered = recover_assignment(inst, lifted_point(inst, lifted), lifted);
    if (recovered.objective > best.objective && respects_mask(recovered.assignment, options.mask))
        best = std::move(recovered);

    PolyblockResult res;
    res.upper_bound = std::max(outer.upper_bound, best.objective);
    res.gap = res.upper_bound - best.objective;
    res.relative_gap = res.upper_bound > 0.0 ? res.gap / res.upper_bound : 0.0;
    res.tolerance = outer.tolerance;
    res.closed = outer.closed && res.gap <= outer.tolerance * (1.0 + 1e-12);
    res.iterations = outer.iterations;
    res.peak_vertices = outer.peak_vertices;
    res.trace = std::move(outer.trace);
    res.allocation = std::move(best);
    return res;
}

}  // namespace noma
