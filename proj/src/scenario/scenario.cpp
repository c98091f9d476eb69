#include "noma/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace noma {

void ScenarioConfig::validate() const {
    if (num_users < 1 || num_subcarriers < 1) throw InvalidInput("scenario: K and N_F must be positive");
    if (!(inner_radius_m > 0.0) || !(outer_radius_m > inner_radius_m) || !std::isfinite(outer_radius_m))
        throw InvalidInput("scenario: need 0 < inner radius < outer radius");
    if (inner_radius_m < 1.0) throw InvalidInput("scenario: inner radius must be at least 1 m");
    if (!std::isfinite(noise_dbm_per_subcarrier)) throw InvalidInput("scenario: noise must be finite");
    if (!(pathloss_exponent > 2.0)) throw InvalidInput("scenario: path loss exponent must exceed 2");
    if (!std::isfinite(pathloss_intercept_db)) throw InvalidInput("scenario: intercept must be finite");
    if (!(shadowing_sigma_db >= 0.0)) throw InvalidInput("scenario: shadowing sigma must be nonnegative");
    if (!std::isfinite(p_max_dbm)) throw InvalidInput("scenario: p_max_dbm must be finite");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double noise_watts(const ScenarioConfig& config) { return dbm_to_watts(config.noise_dbm_per_subcarrier); }

std::mt19937_64 user_stream(std::uint64_t seed, std::uint64_t drop, int user) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(drop), static_cast<std::uint32_t>(drop >> 32),
                      static_cast<std::uint32_t>(user)};
    return std::mt19937_64(seq);
}

double unit_uniform(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

UserDrop drop_users(const ScenarioConfig& config, std::uint64_t drop) {
    config.validate();
    const int k = config.num_users, nf = config.num_subcarriers;
    const double r0 = config.inner_radius_m, r1 = config.outer_radius_m;
    UserDrop out;
    out.distances_m.resize(k);
    out.rho.resize(k);
    out.fading.resize(static_cast<std::size_t>(nf) * k);
    for (int m = 0; m < k; ++m) {
        std::mt19937_64 rng = user_stream(config.seed, drop, m);
        double u = unit_uniform(rng);
        double d = config.area_uniform ? std::sqrt(r0 * r0 + u * (r1 * r1 - r0 * r0)) : r0 + u * (r1 - r0);
        out.distances_m[m] = std::clamp(d, r0, r1);
        // Always consumed so enabling shadowing does not shift the fading draws.
        double u1 = unit_uniform(rng), u2 = unit_uniform(rng);
        double rho = pathloss_linear(config, out.distances_m[m]);
        if (config.shadowing_sigma_db > 0.0) {
            double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
            rho *= std::pow(10.0, config.shadowing_sigma_db * g / 10.0);
        }
        out.rho[m] = rho;
        for (int i = 0; i < nf; ++i) out.fading[static_cast<std::size_t>(i) * k + m] = -std::log(unit_uniform(rng));
    }
    return out;
}

double pathloss_linear(const ScenarioConfig& config, double distance_m) {
    if (!(distance_m >= 1.0)) throw InvalidInput("pathloss_linear: distance must be at least 1 m");
    double db = config.pathloss_intercept_db + 10.0 * config.pathloss_exponent * std::log10(distance_m);
    return std::pow(10.0, -db / 10.0);
}

ProblemInstance build_instance(const ScenarioConfig& config, const UserDrop& drop) {
    const int k = config.num_users, nf = config.num_subcarriers;
    const double sigma2 = noise_watts(config);
    ProblemInstance inst;
    inst.num_users = k;
    inst.num_subcarriers = nf;
    inst.p_max = dbm_to_watts(config.p_max_dbm);
    inst.noise_watts = sigma2;
    double dmax = *std::max_element(drop.distances_m.begin(), drop.distances_m.end());
    inst.weights.resize(k);
    for (int m = 0; m < k; ++m) inst.weights[m] = drop.distances_m[m] / dmax;
    inst.gains.resize(static_cast<std::size_t>(nf) * k);
    for (int i = 0; i < nf; ++i)
        for (int m = 0; m < k; ++m) {
            std::size_t at = static_cast<std::size_t>(i) * k + m;
            inst.gains[at] = drop.rho[m] * drop.fading[at] / sigma2;
        }
    inst.validate();
    return inst;
}

ProblemInstance build_instance(const ScenarioConfig& config, std::uint64_t drop) {
    return build_instance(config, drop_users(config, drop));
}

}  // namespace noma
