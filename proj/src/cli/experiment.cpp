#include "noma/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <thread>

#include "noma/baselines.hpp"
#include "noma/instance_io.hpp"
#include "noma/oracle.hpp"
#include "noma/polyblock.hpp"
#include "noma/sca.hpp"

namespace noma {

using nlohmann::json;

namespace {

constexpr std::pair<SolverKind, const char*> kSolverNames[] = {
    {SolverKind::optimal, "optimal"},
    {SolverKind::sca, "sca"},
    {SolverKind::oma, "oma"},
    {SolverKind::random_pairing, "random_pairing"},
    {SolverKind::oracle, "oracle"},
};

void reject_unknown(const json& doc, const std::set<std::string>& known, const std::string& where) {
    if (!doc.is_object()) throw InvalidInput(where + ": expected an object");
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (!known.count(key)) throw InvalidInput(where + ": unknown field '" + key + "'");
    }
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%#.9g", v);
    return buf;
}

}  // namespace

SolverKind parse_solver(const std::string& name) {
    for (auto [kind, n] : kSolverNames)
        if (name == n) return kind;
    throw InvalidInput("unknown solver '" + name + "'");
}

const char* solver_name(SolverKind kind) {
    for (auto [k, n] : kSolverNames)
        if (k == kind) return n;
    return "?";
}

void ExperimentSpec::validate() const {
    if (solvers.empty()) throw InvalidInput("spec: solver list is empty");
    if (values.empty()) throw InvalidInput("spec: sweep has no values");
    if (drops < 1) throw InvalidInput("spec: drops must be at least 1");
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw InvalidInput("spec: epsilon must lie in (0, 1)");
    ScenarioConfig probe = scenario;
    for (double v : values) {
        if (axis == SweepAxis::num_users) {
            if (!(v >= 1.0) || v != std::floor(v) || v > 1e6) throw InvalidInput("spec: K values must be positive integers");
            probe.num_users = static_cast<int>(v);
        } else {
            if (!std::isfinite(v)) throw InvalidInput("spec: p_max_dbm values must be finite");
            probe.p_max_dbm = v;
        }
        probe.validate();
        for (SolverKind s : solvers)
            if (s == SolverKind::oracle && (probe.num_users > OracleConfig{}.max_users ||
                                            probe.num_subcarriers > OracleConfig{}.max_subcarriers))
                throw InvalidInput("spec: oracle requested outside its size caps");
    }
}

ScenarioConfig scenario_from_json(const json& doc, ScenarioConfig c) {
    reject_unknown(doc,
                   {"K", "N_F", "bandwidth_hz", "carrier_hz", "inner_radius_m", "outer_radius_m",
                    "noise_dbm_per_subcarrier", "pathloss_exponent", "pathloss_intercept_db", "area_uniform",
                    "shadowing_sigma_db", "p_max_dbm", "seed"},
                   "scenario");
    try {
        c.num_users = doc.value("K", c.num_users);
        c.num_subcarriers = doc.value("N_F", c.num_subcarriers);
        c.bandwidth_hz = doc.value("bandwidth_hz", c.bandwidth_hz);
        c.carrier_hz = doc.value("carrier_hz", c.carrier_hz);
        c.inner_radius_m = doc.value("inner_radius_m", c.inner_radius_m);
        c.outer_radius_m = doc.value("outer_radius_m", c.outer_radius_m);
        c.noise_dbm_per_subcarrier = doc.value("noise_dbm_per_subcarrier", c.noise_dbm_per_subcarrier);
        c.pathloss_exponent = doc.value("pathloss_exponent", c.pathloss_exponent);
        c.pathloss_intercept_db = doc.value("pathloss_intercept_db", c.pathloss_intercept_db);
        c.area_uniform = doc.value("area_uniform", c.area_uniform);
        c.shadowing_sigma_db = doc.value("shadowing_sigma_db", c.shadowing_sigma_db);
        c.p_max_dbm = doc.value("p_max_dbm", c.p_max_dbm);
        c.seed = doc.value("seed", c.seed);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("scenario: ") + e.what());
    }
    return c;
}

ExperimentSpec spec_from_json(const json& doc) {
    reject_unknown(doc,
                   {"scenario", "solvers", "sweep", "p_max_dbm", "drops", "seed", "output", "epsilon",
                    "record_wall_time"},
                   "spec");
    ExperimentSpec spec;
    try {
        if (doc.contains("scenario")) spec.scenario = scenario_from_json(doc.at("scenario"));
        if (doc.contains("solvers"))
            for (const json& s : doc.at("solvers")) spec.solvers.push_back(parse_solver(s.get<std::string>()));
        const json& sweep = doc.at("sweep");
        reject_unknown(sweep, {"axis", "values"}, "sweep");
        std::string axis = sweep.at("axis").get<std::string>();
        if (axis == "p_max_dbm")
            spec.axis = SweepAxis::p_max_dbm;
        else if (axis == "K")
            spec.axis = SweepAxis::num_users;
        else
            throw InvalidInput("sweep: axis must be \"p_max_dbm\" or \"K\"");
        spec.values = sweep.at("values").get<std::vector<double>>();
        if (doc.contains("p_max_dbm")) spec.scenario.p_max_dbm = doc.at("p_max_dbm").get<double>();
        spec.drops = doc.value("drops", spec.drops);
        spec.seed = doc.value("seed", spec.seed);
        spec.output = doc.value("output", spec.output);
        spec.epsilon = doc.value("epsilon", spec.epsilon);
        spec.record_wall_time = doc.value("record_wall_time", spec.record_wall_time);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("spec: ") + e.what());
    }
    spec.scenario.seed = spec.seed;
    spec.validate();
    return spec;
}

std::uint64_t pairing_seed(std::uint64_t seed, std::uint64_t drop) {
    // The user slot just past any real user index keeps this stream apart from the channel streams.
    return user_stream(seed, drop, -1)();
}

SolveOutcome run_solver(SolverKind kind, const ProblemInstance& inst, double epsilon, std::uint64_t seed) {
    SolveOutcome out;
    switch (kind) {
        case SolverKind::optimal:
        case SolverKind::oma: {
            PolyblockOptions opt;
            opt.epsilon = epsilon;
            PolyblockResult r = kind == SolverKind::optimal ? solve_optimal(inst, opt) : solve_oma(inst, epsilon);
            out.allocation = std::move(r.allocation);
            out.iterations = r.iterations;
            out.upper_bound = r.upper_bound;
            if (!r.closed) out.status = "gap_open";
            break;
        }
        case SolverKind::sca: {
            ScaResult r = solve_sca(inst);
            out.allocation = std::move(r.allocation);
            out.iterations = r.iterations;
            break;
        }
        case SolverKind::random_pairing:
            out.allocation = solve_random_pairing(inst, seed);
            break;
        case SolverKind::oracle: {
            OracleResult r = brute_force_solve(inst);
            out.allocation = std::move(r.allocation);
            out.iterations = static_cast<int>(std::min<long long>(r.evaluations, 2147483647LL));
            break;
        }
    }
    return out;
}

int default_threads() {
    if (const char* env = std::getenv("NOMA_ALLOC_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 1024L));
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec, int threads) {
    spec.validate();
    const std::size_t points = spec.values.size(), drops = spec.drops, ns = spec.solvers.size();
    std::vector<ResultRow> rows(points * drops * ns);
    const std::size_t tasks = points * drops;
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks;) {
            std::size_t pt = t / drops, d = t % drops;
            ScenarioConfig cfg = spec.scenario;
            cfg.seed = spec.seed;
            if (spec.axis == SweepAxis::num_users)
                cfg.num_users = static_cast<int>(spec.values[pt]);
            else
                cfg.p_max_dbm = spec.values[pt];
            ProblemInstance inst = build_instance(cfg, d);
            for (std::size_t s = 0; s < ns; ++s) {
                ResultRow& row = rows[t * ns + s];
                row.sweep_value = spec.values[pt];
                row.solver = spec.solvers[s];
                row.drop = static_cast<int>(d);
                auto start = std::chrono::steady_clock::now();
                try {
                    SolveOutcome o = run_solver(spec.solvers[s], inst, spec.epsilon, pairing_seed(spec.seed, d));
                    row.objective = o.allocation.objective;
                    row.iterations = o.iterations;
                    row.status = o.status;
                } catch (const std::exception&) {
                    row.status = "failed";
                }
                if (spec.record_wall_time)
                    row.wall_ms =
                        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            }
        }
    };

    int n = threads > 0 ? threads : default_threads();
    n = static_cast<int>(std::min<std::size_t>(n, tasks));
    std::vector<std::thread> pool;
    for (int k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();
    return rows;
}

std::string format_csv(const std::vector<ResultRow>& rows) {
    if (rows.empty()) throw InvalidInput("emit_csv: no results to write");
    std::string out = "sweep_value,solver,drop,objective_bps_hz,wall_ms,iterations,status\n";
    for (const ResultRow& r : rows) {
        out += format_number(r.sweep_value);
        out += ',';
        out += solver_name(r.solver);
        out += ',' + std::to_string(r.drop) + ',';
        if (r.objective) out += format_number(*r.objective);
        out += ',';
        if (r.wall_ms) out += format_number(*r.wall_ms);
        out += ',' + std::to_string(r.iterations) + ',' + r.status + '\n';
    }
    return out;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) { write_text_file(path, format_csv(rows)); }

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    std::vector<SummaryRow> out;
    std::map<std::pair<double, int>, std::vector<double>> groups;
    std::vector<std::pair<double, int>> order;
    for (const ResultRow& r : rows) {
        auto key = std::make_pair(r.sweep_value, static_cast<int>(r.solver));
        if (!groups.count(key)) order.push_back(key);
        if (r.objective) groups[key].push_back(*r.objective);
        else groups[key];
    }
    for (const auto& key : order) {
        const std::vector<double>& v = groups[key];
        SummaryRow s;
        s.sweep_value = key.first;
        s.solver = static_cast<SolverKind>(key.second);
        s.count = static_cast<int>(v.size());
        if (!v.empty()) {
            double sum = 0.0;
            for (double x : v) sum += x;
            s.mean = sum / v.size();
            if (v.size() > 1) {
                double ss = 0.0;
                for (double x : v) ss += (x - s.mean) * (x - s.mean);
                s.std_error = std::sqrt(ss / (v.size() - 1) / v.size());
            }
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace noma
