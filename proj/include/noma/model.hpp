#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace noma {

class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Subcarrier i, users m and n are 0-based everywhere in the C++ API.
// delta_index/inverse_delta keep the 1-based convention of the lifted layout.
struct ProblemInstance {
    int num_users = 0;
    int num_subcarriers = 0;
    double p_max = 0.0;               // watts
    std::vector<double> weights;      // K
    std::vector<double> gains;        // N_F x K, row-major by subcarrier
    std::optional<double> noise_watts;  // carried from the scenario when known

    double gain(int i, int m) const { return gains[static_cast<std::size_t>(i) * num_users + m]; }
    double weight(int m) const { return weights[m]; }
    int lifted_size() const { return 2 * num_subcarriers * num_users * num_users; }

    void validate() const;
};

// s_{m,n}^i stored as N_F x K x K bytes.
struct SubcarrierAssignment {
    int num_users = 0;
    int num_subcarriers = 0;
    std::vector<unsigned char> s;

    SubcarrierAssignment() = default;
    SubcarrierAssignment(int n_f, int k);

    unsigned char& at(int i, int m, int n) { return s[(static_cast<std::size_t>(i) * num_users + m) * num_users + n]; }
    unsigned char at(int i, int m, int n) const { return s[(static_cast<std::size_t>(i) * num_users + m) * num_users + n]; }

    // First active pair on subcarrier i, if any.
    std::optional<std::pair<int, int>> pair_on(int i) const;
    void set_pair(int i, int m, int n);
    void clear(int i);
    bool operator==(const SubcarrierAssignment&) const = default;
};

struct PowerAllocation {
    int num_users = 0;
    int num_subcarriers = 0;
    std::vector<double> p;  // N_F x K

    PowerAllocation() = default;
    PowerAllocation(int n_f, int k);

    double& at(int i, int m) { return p[static_cast<std::size_t>(i) * num_users + m]; }
    double at(int i, int m) const { return p[static_cast<std::size_t>(i) * num_users + m]; }
};

// First half p~_{m,n,m}^i, second half p~_{m,n,n}^i, each indexed by delta_index - 1.
using LiftedPower = std::vector<double>;

struct Allocation {
    SubcarrierAssignment assignment;
    PowerAllocation power;
    double objective = 0.0;
};

double pair_rate(double h_m, double h_n, double p_m, double p_n, double w_m, double w_n);
double oma_rate(double h, double p_total, double w);

// Rate of one scheduled subcarrier. An m == n entry is an OMA user whose
// transmit power is p_m^i.
double subcarrier_rate(const ProblemInstance& inst, int i, int m, int n, const PowerAllocation& power);
double system_throughput(const ProblemInstance& inst, const PowerAllocation& power,
                         const SubcarrierAssignment& assignment);

// Power drawn from the budget by the scheduled entries.
double scheduled_power(const PowerAllocation& power, const SubcarrierAssignment& assignment);

struct Violation {
    std::string constraint;  // "C1", "C2", "C3", "C4", "SIC"
    int subcarrier = -1;
    double slack = 0.0;      // negative means violated by |slack|
    std::string detail;
};

struct FeasibilityReport {
    std::vector<Violation> violations;
    bool feasible() const { return violations.empty(); }
};

FeasibilityReport check_feasible(const ProblemInstance& inst, const PowerAllocation& power,
                                 const SubcarrierAssignment& assignment);

struct DeltaEntry {
    int i = 0;  // 1-based
    int m = 0;
    int n = 0;
    bool v_half = false;
};

int delta_index(int i, int m, int n, int num_users);
DeltaEntry inverse_delta(int d, int num_users, int num_subcarriers);
double index_weight(int d, const ProblemInstance& inst);

// 0-based slot of triple (i,m,n) inside one half of the lifted vector.
inline int triple_slot(int i, int m, int n, int num_users) { return (i * num_users + m) * num_users + n; }

LiftedPower lift(const PowerAllocation& power, const SubcarrierAssignment& assignment);
PowerAllocation recover(const LiftedPower& lifted, const SubcarrierAssignment& assignment);

bool sic_valid(const ProblemInstance& inst, int i, int m, int n);

// Which pair shapes a solver may schedule.
enum class PairMask { all, oma_only };

// SIC-valid pairs of subcarrier i in canonical (m, n) order, filtered by mask.
std::vector<std::pair<int, int>> valid_pairs(const ProblemInstance& inst, int i, PairMask mask = PairMask::all);

Allocation make_allocation(const ProblemInstance& inst, SubcarrierAssignment assignment, PowerAllocation power);

}  // namespace noma
