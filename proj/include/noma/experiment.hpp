#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "noma/model.hpp"
#include "noma/scenario.hpp"

namespace noma {

enum class SolverKind { optimal, sca, oma, random_pairing, oracle };
enum class SweepAxis { p_max_dbm, num_users };

SolverKind parse_solver(const std::string& name);
const char* solver_name(SolverKind kind);

struct ExperimentSpec {
    ScenarioConfig scenario;
    std::vector<SolverKind> solvers;
    SweepAxis axis = SweepAxis::p_max_dbm;
    std::vector<double> values;
    int drops = 50;
    std::string output;
    std::uint64_t seed = 1;
    double epsilon = 1e-3;
    bool record_wall_time = false;

    void validate() const;
};

// {"scenario": {...}, "solvers": [...], "sweep": {"axis": "p_max_dbm" | "K", "values": [...]},
//  "p_max_dbm", "drops", "seed", "output", "epsilon", "record_wall_time"}
ExperimentSpec spec_from_json(const nlohmann::json& doc);
ScenarioConfig scenario_from_json(const nlohmann::json& doc, ScenarioConfig base = {});

struct SolveOutcome {
    Allocation allocation;
    int iterations = 0;
    std::string status = "ok";  // ok, gap_open
    std::optional<double> upper_bound;
};

// random_pairing draws with `seed`; the other solvers ignore it.
SolveOutcome run_solver(SolverKind kind, const ProblemInstance& inst, double epsilon, std::uint64_t seed);

// Seed of the random pairing baseline for one drop; independent of the sweep point.
std::uint64_t pairing_seed(std::uint64_t seed, std::uint64_t drop);

struct ResultRow {
    double sweep_value = 0.0;
    SolverKind solver = SolverKind::optimal;
    int drop = 0;
    std::optional<double> objective;
    std::optional<double> wall_ms;
    int iterations = 0;
    std::string status;
};

// Rows ordered by sweep point, then drop, then the spec's solver order.
std::vector<ResultRow> run_sweep(const ExperimentSpec& spec, int threads = 0);

// Worker count from NOMA_ALLOC_THREADS, else the hardware concurrency.
int default_threads();

std::string format_csv(const std::vector<ResultRow>& rows);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

struct SummaryRow {
    double sweep_value = 0.0;
    SolverKind solver = SolverKind::optimal;
    int count = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

}  // namespace noma
