#include "noma/model.hpp"

#include <cmath>
#include <sstream>

namespace noma {

void ProblemInstance::validate() const {
    if (num_users < 1 || num_subcarriers < 1)
        throw InvalidInput("instance needs K >= 1 and N_F >= 1");
    if (!(p_max >= 0.0) || !std::isfinite(p_max))
        throw InvalidInput("p_max must be finite and nonnegative");
    if (static_cast<int>(weights.size()) != num_users)
        throw InvalidInput("weights must have K entries");
    if (static_cast<int>(gains.size()) != num_users * num_subcarriers)
        throw InvalidInput("gains must have N_F x K entries");
    for (double w : weights)
        if (!(w >= 0.0 && w <= 1.0)) throw InvalidInput("weights must lie in [0, 1]");
    for (double h : gains)
        if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("gains must be positive and finite");
}

SubcarrierAssignment::SubcarrierAssignment(int n_f, int k)
    : num_users(k), num_subcarriers(n_f), s(static_cast<std::size_t>(n_f) * k * k, 0) {}

std::optional<std::pair<int, int>> SubcarrierAssignment::pair_on(int i) const {
    for (int m = 0; m < num_users; ++m)
        for (int n = 0; n < num_users; ++n)
            if (at(i, m, n)) return std::make_pair(m, n);
    return std::nullopt;
}

void SubcarrierAssignment::set_pair(int i, int m, int n) {
    clear(i);
    at(i, m, n) = 1;
}

void SubcarrierAssignment::clear(int i) {
    for (int m = 0; m < num_users; ++m)
        for (int n = 0; n < num_users; ++n) at(i, m, n) = 0;
}

PowerAllocation::PowerAllocation(int n_f, int k)
    : num_users(k), num_subcarriers(n_f), p(static_cast<std::size_t>(n_f) * k, 0.0) {}

double pair_rate(double h_m, double h_n, double p_m, double p_n, double w_m, double w_n) {
    if (h_m > h_n) throw InvalidInput("pair_rate: SIC ordering requires h_m <= h_n");
    if (!(h_m > 0.0) || p_m < 0.0 || p_n < 0.0) throw InvalidInput("pair_rate: bad gains or powers");
    return w_m * std::log2(1.0 + h_m * p_m / (h_m * p_n + 1.0)) + w_n * std::log2(1.0 + h_n * p_n);
}

double oma_rate(double h, double p_total, double w) {
    if (p_total < 0.0) throw InvalidInput("oma_rate: negative power");
    return w * std::log2(1.0 + h * p_total);
}

double subcarrier_rate(const ProblemInstance& inst, int i, int m, int n, const PowerAllocation& power) {
    if (m == n) return oma_rate(inst.gain(i, m), power.at(i, m), inst.weight(m));
    return pair_rate(inst.gain(i, m), inst.gain(i, n), power.at(i, m), power.at(i, n), inst.weight(m),
                     inst.weight(n));
}

double system_throughput(const ProblemInstance& inst, const PowerAllocation& power,
                         const SubcarrierAssignment& assignment) {
    double total = 0.0;
    for (int i = 0; i < inst.num_subcarriers; ++i) {
        int active = 0;
        for (int m = 0; m < inst.num_users; ++m)
            for (int n = 0; n < inst.num_users; ++n) {
                unsigned char v = assignment.at(i, m, n);
                if (v > 1) throw InvalidInput("system_throughput: assignment entries must be binary");
                if (!v) continue;
                if (!sic_valid(inst, i, m, n)) throw InvalidInput("system_throughput: SIC-invalid pair scheduled");
                if (++active > 1) throw InvalidInput("system_throughput: more than one pair on a subcarrier");
                total += subcarrier_rate(inst, i, m, n, power);
            }
    }
    return total;
}

double scheduled_power(const PowerAllocation& power, const SubcarrierAssignment& assignment) {
    double total = 0.0;
    for (int i = 0; i < assignment.num_subcarriers; ++i)
        for (int m = 0; m < assignment.num_users; ++m)
            for (int n = 0; n < assignment.num_users; ++n) {
                if (!assignment.at(i, m, n)) continue;
                total += power.at(i, m);
                if (n != m) total += power.at(i, n);
            }
    return total;
}

FeasibilityReport check_feasible(const ProblemInstance& inst, const PowerAllocation& power,
                                 const SubcarrierAssignment& assignment) {
    FeasibilityReport report;
    auto add = [&](const char* c, int i, double slack, std::string detail) {
        report.violations.push_back({c, i, slack, std::move(detail)});
    };
    for (int i = 0; i < inst.num_subcarriers; ++i) {
        int active = 0;
        for (int m = 0; m < inst.num_users; ++m) {
            double p = power.at(i, m);
            if (!(p >= 0.0)) add("C4", i, p, "negative power for user " + std::to_string(m));
            for (int n = 0; n < inst.num_users; ++n) {
                unsigned char v = assignment.at(i, m, n);
                if (v > 1) add("C2", i, -1.0, "non-binary indicator");
                if (!v) continue;
                ++active;
                if (!sic_valid(inst, i, m, n)) {
                    std::ostringstream os;
                    os << "pair (" << m << "," << n << ") violates H_m <= H_n";
                    add("SIC", i, inst.gain(i, n) - inst.gain(i, m), os.str());
                }
            }
        }
        if (active > 1) add("C3", i, 1.0 - active, std::to_string(active) + " pairs active");
    }
    double used = scheduled_power(power, assignment);
    double slack = inst.p_max - used;
    if (slack < -1e-9 * inst.p_max || (inst.p_max == 0.0 && used > 0.0))
        add("C1", -1, slack, "scheduled power exceeds p_max");
    return report;
}

int delta_index(int i, int m, int n, int num_users) {
    if (i < 1 || m < 1 || n < 1 || m > num_users || n > num_users)
        throw InvalidInput("delta_index: index out of range");
    return (i - 1) * num_users * num_users + (m - 1) * num_users + n;
}

DeltaEntry inverse_delta(int d, int num_users, int num_subcarriers) {
    int half = num_subcarriers * num_users * num_users;
    if (d < 1 || d > 2 * half) throw InvalidInput("inverse_delta: index out of range");
    DeltaEntry e;
    e.v_half = d > half;
    int r = (e.v_half ? d - half : d) - 1;
    e.i = r / (num_users * num_users) + 1;
    r %= num_users * num_users;
    e.m = r / num_users + 1;
    e.n = r % num_users + 1;
    return e;
}

double index_weight(int d, const ProblemInstance& inst) {
    DeltaEntry e = inverse_delta(d, inst.num_users, inst.num_subcarriers);
    return e.v_half ? inst.weight(e.n - 1) : inst.weight(e.m - 1);
}

// An OMA user's power is split evenly over the two slots, so the slot sum is
// the user's transmit power and u*v = 1 + H*(a+b).
LiftedPower lift(const PowerAllocation& power, const SubcarrierAssignment& assignment) {
    const int k = assignment.num_users;
    const int half = assignment.num_subcarriers * k * k;
    LiftedPower out(2 * static_cast<std::size_t>(half), 0.0);
    for (int i = 0; i < assignment.num_subcarriers; ++i)
        for (int m = 0; m < k; ++m)
            for (int n = 0; n < k; ++n) {
                if (!assignment.at(i, m, n)) continue;
                int t = triple_slot(i, m, n, k);
                if (m == n) {
                    out[t] = 0.5 * power.at(i, m);
                    out[half + t] = 0.5 * power.at(i, m);
                } else {
                    out[t] = power.at(i, m);
                    out[half + t] = power.at(i, n);
                }
            }
    return out;
}

PowerAllocation recover(const LiftedPower& lifted, const SubcarrierAssignment& assignment) {
    const int k = assignment.num_users;
    const int half = assignment.num_subcarriers * k * k;
    PowerAllocation out(assignment.num_subcarriers, k);
    for (int i = 0; i < assignment.num_subcarriers; ++i)
        for (int m = 0; m < k; ++m)
            for (int n = 0; n < k; ++n) {
                if (!assignment.at(i, m, n)) continue;
                int t = triple_slot(i, m, n, k);
                if (m == n) {
                    out.at(i, m) = lifted[t] + lifted[half + t];
                } else {
                    out.at(i, m) = lifted[t];
                    out.at(i, n) = lifted[half + t];
                }
            }
    return out;
}

bool sic_valid(const ProblemInstance& inst, int i, int m, int n) {
    double hm = inst.gain(i, m), hn = inst.gain(i, n);
    if (hm < hn) return true;
    if (hm == hn) return m <= n;
    return false;
}

std::vector<std::pair<int, int>> valid_pairs(const ProblemInstance& inst, int i, PairMask mask) {
    std::vector<std::pair<int, int>> out;
    for (int m = 0; m < inst.num_users; ++m)
        for (int n = 0; n < inst.num_users; ++n) {
            if (mask == PairMask::oma_only && m != n) continue;
            if (sic_valid(inst, i, m, n)) out.emplace_back(m, n);
        }
    return out;
}

Allocation make_allocation(const ProblemInstance& inst, SubcarrierAssignment assignment, PowerAllocation power) {
    Allocation a;
    a.objective = system_throughput(inst, power, assignment);
    a.assignment = std::move(assignment);
    a.power = std::move(power);
    return a;
}

}  // namespace noma
