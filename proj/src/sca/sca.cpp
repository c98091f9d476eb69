#include <algorithm>
#include <cmath>
#include <memory>

#include "noma/sca.hpp"

namespace noma {

namespace {
const double kLn2 = std::log(2.0);
}

double default_eta(const ProblemInstance& inst) {
    double ratio;
    if (inst.noise_watts && *inst.noise_watts > 0.0) {
        ratio = inst.p_max / *inst.noise_watts;
    } else {
        double hmax = 0.0;
        for (double h : inst.gains) hmax = std::max(hmax, h);
        ratio = hmax * inst.p_max;
    }
    return 10.0 * std::log2(1.0 + ratio);
}

double eval_F(const ProblemInstance& inst, const LiftedPower& lifted) {
    const int k = inst.num_users, half = inst.num_subcarriers * k * k;
    double f = 0.0;
    for (int i = 0; i < inst.num_subcarriers; ++i)
        for (int m = 0; m < k; ++m)
            for (int n = 0; n < k; ++n) {
                int t = triple_slot(i, m, n, k);
                double a = lifted[t], b = lifted[half + t];
                if (a == 0.0 && b == 0.0) continue;
                f -= inst.weight(m) * std::log2(1.0 + inst.gain(i, m) * (a + b));
                f -= inst.weight(n) * std::log2(1.0 + inst.gain(i, n) * b);
            }
    return f;
}

double eval_G(const ProblemInstance& inst, const LiftedPower& lifted) {
    const int k = inst.num_users, half = inst.num_subcarriers * k * k;
    double g = 0.0;
    for (int i = 0; i < inst.num_subcarriers; ++i)
        for (int m = 0; m < k; ++m)
            for (int n = 0; n < k; ++n) {
                double b = lifted[half + triple_slot(i, m, n, k)];
                if (b != 0.0) g -= inst.weight(m) * std::log2(1.0 + inst.gain(i, m) * b);
            }
    return g;
}

double eval_H(const std::vector<double>& s) {
    double h = 0.0;
    for (double v : s) h += v;
    return h;
}

double eval_M(const std::vector<double>& s) {
    double q = 0.0;
    for (double v : s) q += v * v;
    return q;
}

LiftedPower grad_G(const ProblemInstance& inst, const LiftedPower& lifted_ref) {
    const int k = inst.num_users, half = inst.num_subcarriers * k * k;
    LiftedPower g(lifted_ref.size(), 0.0);
    for (int i = 0; i < inst.num_subcarriers; ++i)
        for (int m = 0; m < k; ++m)
            for (int n = 0; n < k; ++n) {
                int t = half + triple_slot(i, m, n, k);
                double hm = inst.gain(i, m);
                g[t] = -inst.weight(m) * hm / ((1.0 + hm * lifted_ref[t]) * kLn2);
            }
    return g;
}

std::vector<double> grad_M(const std::vector<double>& s_ref) {
    std::vector<double> g(s_ref.size());
    for (std::size_t j = 0; j < s_ref.size(); ++j) g[j] = 2.0 * s_ref[j];
    return g;
}

double penalized_objective(const ProblemInstance& inst, const RelaxedPoint& point, double eta) {
    return eval_F(inst, point.lifted) - eval_G(inst, point.lifted) + eta * (eval_H(point.s) - eval_M(point.s));
}

ScaLayout::ScaLayout(const ProblemInstance& inst, PairMask mask) : inst_(&inst) {
    int v = 0;
    for (int i = 0; i < inst.num_subcarriers; ++i)
        for (auto [m, n] : valid_pairs(inst, i, mask)) {
            triples_.push_back({i, m, n, v, v + 1, v + 2});
            v += 3;
        }
    p_base_ = v;
    num_vars_ = v + inst.num_subcarriers * inst.num_users;
}

Vec ScaLayout::pack(const RelaxedPoint& point) const {
    const int k = inst_->num_users, half = inst_->num_subcarriers * k * k;
    Vec x(num_vars_, 0.0);
    for (const Triple& t : triples_) {
        int slot = triple_slot(t.i, t.m, t.n, k);
        x[t.a] = point.lifted[slot];
        x[t.b] = point.lifted[half + slot];
        x[t.s] = point.s[slot];
    }
    for (int i = 0; i < inst_->num_subcarriers; ++i)
        for (int m = 0; m < k; ++m) x[p_index(i, m)] = point.p_aux[i * k + m];
    return x;
}

RelaxedPoint ScaLayout::unpack(const Vec& x) const {
    const int k = inst_->num_users, half = inst_->num_subcarriers * k * k;
    RelaxedPoint pt;
    pt.lifted.assign(2 * static_cast<std::size_t>(half), 0.0);
    pt.s.assign(half, 0.0);
    pt.p_aux.assign(static_cast<std::size_t>(inst_->num_subcarriers) * k, 0.0);
    for (const Triple& t : triples_) {
        int slot = triple_slot(t.i, t.m, t.n, k);
        pt.lifted[slot] = x[t.a];
        pt.lifted[half + slot] = x[t.b];
        pt.s[slot] = x[t.s];
    }
    for (int i = 0; i < inst_->num_subcarriers; ++i)
        for (int m = 0; m < k; ++m) pt.p_aux[i * k + m] = x[p_index(i, m)];
    return pt;
}

LinearProgram ScaLayout::polytope() const {
    const double P = inst_->p_max;
    LinearProgram lp(num_vars_);
    for (const Triple& t : triples_) lp.upper[t.s] = 1.0;
    for (int j = p_base_; j < num_vars_; ++j) lp.upper[j] = P;

    Vec c1(num_vars_, 0.0);
    for (const Triple& t : triples_) c1[t.a] = c1[t.b] = 1.0;
    lp.add_row(c1, P);

    for (int i = 0; i < inst_->num_subcarriers; ++i) {
        Vec c3(num_vars_, 0.0);
        bool any = false;
        for (const Triple& t : triples_)
            if (t.i == i) c3[t.s] = 1.0, any = true;
        if (any) lp.add_row(c3, 1.0);
    }
    for (const Triple& t : triples_) {
        const int slots[2] = {t.a, t.b};
        const int users[2] = {t.m, t.n};
        for (int h = 0; h < 2; ++h) {
            int pv = p_index(t.i, users[h]);
            Vec r(num_vars_, 0.0);
            r[slots[h]] = 1.0;  // C5
            r[t.s] = -P;
            lp.add_row(r, 0.0);
            Vec r6(num_vars_, 0.0);  // C6
            r6[slots[h]] = 1.0;
            r6[pv] = -1.0;
            lp.add_row(r6, 0.0);
            Vec r7(num_vars_, 0.0);  // C7
            r7[pv] = 1.0;
            r7[slots[h]] = -1.0;
            r7[t.s] = P;
            lp.add_row(r7, P);
        }
    }
    return lp;
}

double relaxed_violation(const ProblemInstance& inst, const RelaxedPoint& point, PairMask mask) {
    ScaLayout layout(inst, mask);
    double worst = max_violation(layout.polytope(), layout.pack(point));
    RelaxedPoint round_trip = layout.unpack(layout.pack(point));
    for (std::size_t j = 0; j < point.lifted.size(); ++j)
        worst = std::max(worst, std::fabs(point.lifted[j] - round_trip.lifted[j]));
    for (std::size_t j = 0; j < point.s.size(); ++j)
        worst = std::max(worst, std::fabs(point.s[j] - round_trip.s[j]));
    return worst;
}

namespace {

struct SurrogateData {
    const ProblemInstance* inst;
    ScaLayout layout;
    Vec x_k;
    std::vector<double> grad_g;  // per triple, on the b slot
    double g_k = 0.0;
    double m_k = 0.0;
    double eta = 0.0;

    SurrogateData(const ProblemInstance& i, PairMask mask) : inst(&i), layout(i, mask) {}

    double value(const Vec& x) const {
        double v = -g_k;
        double pen = -m_k;
        std::size_t j = 0;
        for (const auto& t : layout.triples()) {
            double hm = inst->gain(t.i, t.m), hn = inst->gain(t.i, t.n);
            double a = x[t.a], b = x[t.b], s = x[t.s];
            v -= inst->weight(t.m) * std::log2(1.0 + hm * (a + b));
            v -= inst->weight(t.n) * std::log2(1.0 + hn * b);
            v -= grad_g[j++] * (b - x_k[t.b]);
            pen += s - 2.0 * x_k[t.s] * (s - x_k[t.s]);
        }
        return v + eta * pen;
    }

    Vec gradient(const Vec& x) const {
        Vec g(x.size(), 0.0);
        std::size_t j = 0;
        for (const auto& t : layout.triples()) {
            double hm = inst->gain(t.i, t.m), hn = inst->gain(t.i, t.n);
            double a = x[t.a], b = x[t.b];
            double du = -inst->weight(t.m) * hm / ((1.0 + hm * (a + b)) * kLn2);
            double dv = -inst->weight(t.n) * hn / ((1.0 + hn * b) * kLn2);
            g[t.a] = du;
            g[t.b] = du + dv - grad_g[j++];
            g[t.s] = eta * (1.0 - 2.0 * x_k[t.s]);
        }
        return g;
    }
};

}  // namespace

ConvexSubproblem build_sca_subproblem(const ProblemInstance& inst, const RelaxedPoint& point_k,
                                      const ScaConfig& config) {
    if (relaxed_violation(inst, point_k, config.mask) > 1e-8 * std::max(1.0, inst.p_max))
        throw InvalidInput("build_sca_subproblem: expansion point violates C1, C2b, C3 or C5-C8");
    auto data = std::make_shared<SurrogateData>(inst, config.mask);
    data->eta = config.eta ? *config.eta : default_eta(inst);
    data->x_k = data->layout.pack(point_k);
    data->g_k = eval_G(inst, point_k.lifted);
    data->m_k = eval_M(point_k.s);
    LiftedPower gg = grad_G(inst, point_k.lifted);
    const int half = inst.num_subcarriers * inst.num_users * inst.num_users;
    for (const auto& t : data->layout.triples())
        data->grad_g.push_back(gg[half + triple_slot(t.i, t.m, t.n, inst.num_users)]);

    ConvexSubproblem sub;
    sub.value = [data](const Vec& x) { return data->value(x); };
    sub.gradient = [data](const Vec& x) { return data->gradient(x); };
    sub.polytope = data->layout.polytope();
    sub.tolerance = config.inner_tolerance;
    sub.max_iterations = config.inner_max_iterations;
    return sub;
}

SubcarrierAssignment round_assignment(const ProblemInstance& inst, const std::vector<double>& s_relaxed) {
    const int k = inst.num_users;
    SubcarrierAssignment out(inst.num_subcarriers, k);
    for (int i = 0; i < inst.num_subcarriers; ++i) {
        double best = -1.0;
        std::pair<int, int> arg{-1, -1};
        for (auto [m, n] : valid_pairs(inst, i)) {
            double v = s_relaxed[triple_slot(i, m, n, k)];
            if (v > best) {
                best = v;
                arg = {m, n};
            }
        }
        if (arg.first >= 0 && best >= 0.5) out.set_pair(i, arg.first, arg.second);
    }
    return out;
}

RelaxedPoint initial_point(const ProblemInstance& inst, PairMask mask) {
    const int k = inst.num_users, half = inst.num_subcarriers * k * k;
    RelaxedPoint pt;
    pt.lifted.assign(2 * static_cast<std::size_t>(half), 0.0);
    pt.s.assign(half, 0.0);
    pt.p_aux.assign(static_cast<std::size_t>(inst.num_subcarriers) * k, 0.0);
    const double share = inst.p_max / inst.num_subcarriers;
    for (int i = 0; i < inst.num_subcarriers; ++i) {
        double best = -1.0;
        std::pair<int, int> arg{-1, -1};
        for (auto [m, n] : valid_pairs(inst, i, mask)) {
            double v = PairCurve(inst, i, m, n).value(share);
            if (v > best) {
                best = v;
                arg = {m, n};
            }
        }
        if (arg.first < 0) continue;
        auto [m, n] = arg;
        int t = triple_slot(i, m, n, k);
        pt.s[t] = 1.0;
        pt.lifted[t] = 0.5 * share;
        pt.lifted[half + t] = 0.5 * share;
        pt.p_aux[i * k + m] = 0.5 * share;
        pt.p_aux[i * k + n] = 0.5 * share;
    }
    return pt;
}

namespace {

double binary_deviation(const ProblemInstance& inst, const std::vector<double>& s, PairMask mask) {
    double worst = 0.0;
    for (int i = 0; i < inst.num_subcarriers; ++i)
        for (auto [m, n] : valid_pairs(inst, i, mask)) {
            double v = s[triple_slot(i, m, n, inst.num_users)];
            worst = std::max(worst, std::fabs(v - std::round(v)));
        }
    return worst;
}

}  // namespace

ScaResult solve_sca(const ProblemInstance& inst, const ScaConfig& config) {
    inst.validate();
    if (config.max_iterations < 1) throw InvalidInput("solve_sca: max_iterations must be >= 1");
    ScaResult res;
    res.eta = config.eta ? *config.eta : default_eta(inst);
    if (res.eta < 0.0) throw InvalidInput("solve_sca: eta must be nonnegative");
    ScaConfig cfg = config;
    cfg.eta = res.eta;

    ScaLayout layout(inst, cfg.mask);
    RelaxedPoint point = initial_point(inst, cfg.mask);
    double current = penalized_objective(inst, point, res.eta);
    res.trace.push_back({0, current, binary_deviation(inst, point.s, cfg.mask), 0.0});

    for (int k = 1; k <= cfg.max_iterations; ++k) {
        ConvexSubproblem sub = build_sca_subproblem(inst, point, cfg);
        ConvexResult inner;
        try {
            inner = minimize_convex(sub, layout.pack(point));
        } catch (const std::exception& e) {
            throw SolverFailure("solve_sca iteration " + std::to_string(k) + ": " + e.what());
        }
        RelaxedPoint next = layout.unpack(inner.x);
        double value = penalized_objective(inst, next, res.eta);
        res.iterations = k;
        // The surrogate touches at the expansion point, so a rise can only be
        // rounding noise; keep the previous iterate in that case.
        if (!(value <= current)) break;
        double change = current - value;
        point = std::move(next);
        res.trace.push_back({k, value, binary_deviation(inst, point.s, cfg.mask), inner.gap});
        double prev = current;
        current = value;
        if (change <= cfg.objective_tolerance * (std::fabs(prev) + 1e-12)) break;
    }

    res.max_binary_deviation = binary_deviation(inst, point.s, cfg.mask);
    res.terminal = point;
    SubcarrierAssignment s = round_assignment(inst, point.s);
    res.allocation = optimize_fixed_assignment(inst, s);
    return res;
}

}  // namespace noma
