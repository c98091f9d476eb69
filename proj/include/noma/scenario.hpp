#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "noma/model.hpp"

namespace noma {

struct ScenarioConfig {
    int num_users = 2;
    int num_subcarriers = 64;
    double bandwidth_hz = 5e6;
    double carrier_hz = 2.5e9;  // metadata only
    double inner_radius_m = 30.0;
    double outer_radius_m = 600.0;
    double noise_dbm_per_subcarrier = -128.0;
    double pathloss_exponent = 3.6;
    double pathloss_intercept_db = 30.0;  // loss at 1 m
    bool area_uniform = true;             // false: uniform in radius
    double shadowing_sigma_db = 0.0;      // 0 disables log-normal shadowing
    double p_max_dbm = 40.0;
    std::uint64_t seed = 1;

    void validate() const;
};

struct UserDrop {
    std::vector<double> distances_m;  // K
    std::vector<double> rho;          // K, linear large-scale gain
    std::vector<double> fading;       // N_F x K, |h|^2
};

double dbm_to_watts(double dbm);
double noise_watts(const ScenarioConfig& config);

// Independent stream for user m of drop d; the same user of the same drop sees
// the same stream whatever K is.
std::mt19937_64 user_stream(std::uint64_t seed, std::uint64_t drop, int user);

// Uniform on (0, 1) from one 64-bit draw.
double unit_uniform(std::mt19937_64& rng);

UserDrop drop_users(const ScenarioConfig& config, std::uint64_t drop);
double pathloss_linear(const ScenarioConfig& config, double distance_m);
ProblemInstance build_instance(const ScenarioConfig& config, std::uint64_t drop);
ProblemInstance build_instance(const ScenarioConfig& config, const UserDrop& drop);

}  // namespace noma
