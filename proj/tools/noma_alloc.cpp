#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "noma/experiment.hpp"
#include "noma/instance_io.hpp"
#include "noma/scenario.hpp"

namespace {

enum Exit { kOk = 0, kValidation = 1, kSolver = 2, kIo = 3 };

int cmd_gen(const noma::ScenarioConfig& base, const std::string& scenario_file, std::uint64_t drop,
            const std::string& output) {
    noma::ScenarioConfig cfg = base;
    if (!scenario_file.empty()) cfg = noma::scenario_from_json(noma::read_json_file(scenario_file), cfg);
    noma::ProblemInstance inst = noma::build_instance(cfg, drop);
    std::string text = noma::instance_to_json(inst).dump(2) + "\n";
    if (output.empty() || output == "-")
        std::cout << text;
    else
        noma::write_text_file(output, text);
    return kOk;
}

int cmd_solve(const std::string& path, const std::string& solver, double epsilon, std::uint64_t seed) {
    noma::SolverKind kind = noma::parse_solver(solver);
    noma::ProblemInstance inst = noma::instance_from_json(noma::read_json_file(path));
    noma::SolveOutcome out = noma::run_solver(kind, inst, epsilon, seed);
    nlohmann::json doc = noma::allocation_to_json(out.allocation);
    doc["solver"] = solver;
    doc["status"] = out.status;
    doc["iterations"] = out.iterations;
    if (out.upper_bound) doc["upper_bound"] = *out.upper_bound;
    std::cout << doc.dump(2) << "\n";
    return kOk;
}

int cmd_sweep(const std::string& spec_path, const std::string& output_override) {
    noma::ExperimentSpec spec = noma::spec_from_json(noma::read_json_file(spec_path));
    if (!output_override.empty()) spec.output = output_override;
    if (spec.output.empty()) throw noma::InvalidInput("spec: no output path");
    std::vector<noma::ResultRow> rows = noma::run_sweep(spec);
    noma::emit_csv(rows, spec.output);
    std::printf("%-12s %-15s %6s %14s %12s\n", "sweep_value", "solver", "n", "mean", "std_error");
    for (const noma::SummaryRow& s : noma::summarize(rows))
        std::printf("%-12g %-15s %6d %14.6f %12.6f\n", s.sweep_value, noma::solver_name(s.solver), s.count, s.mean,
                    s.std_error);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint power and subcarrier allocation for multicarrier NOMA"};
    app.require_subcommand(1);

    noma::ScenarioConfig gen_cfg;
    std::string gen_scenario, gen_output;
    std::uint64_t gen_drop = 0;
    auto* gen = app.add_subcommand("gen", "Generate one random instance as JSON");
    gen->add_option("-K,--users", gen_cfg.num_users, "Number of users")->check(CLI::PositiveNumber);
    gen->add_option("-N,--subcarriers", gen_cfg.num_subcarriers, "Number of subcarriers")->check(CLI::PositiveNumber);
    gen->add_option("-p,--p-max-dbm", gen_cfg.p_max_dbm, "Power budget in dBm");
    gen->add_option("-s,--seed", gen_cfg.seed, "Global seed");
    gen->add_option("-d,--drop", gen_drop, "Drop index");
    gen->add_option("--scenario", gen_scenario, "Scenario JSON overriding the defaults");
    gen->add_option("-o,--output", gen_output, "Output file (stdout when omitted)");

    std::string solve_path, solve_solver = "optimal";
    double solve_eps = 1e-3;
    std::uint64_t solve_seed = 1;
    auto* solve = app.add_subcommand("solve", "Solve one instance and print the allocation as JSON");
    solve->add_option("instance", solve_path, "Instance JSON file")->required();
    solve->add_option("--solver", solve_solver, "optimal, sca, oma, random_pairing or oracle");
    solve->add_option("--epsilon", solve_eps, "Polyblock tolerance");
    solve->add_option("--seed", solve_seed, "Seed of the random pairing baseline");

    std::string sweep_spec, sweep_output;
    auto* sweep = app.add_subcommand("sweep", "Run an experiment spec and write the CSV");
    sweep->add_option("spec", sweep_spec, "Experiment spec JSON file")->required();
    sweep->add_option("-o,--output", sweep_output, "Output CSV (overrides the spec)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*gen) return cmd_gen(gen_cfg, gen_scenario, gen_drop, gen_output);
        if (*solve) return cmd_solve(solve_path, solve_solver, solve_eps, solve_seed);
        if (*sweep) return cmd_sweep(sweep_spec, sweep_output);
    } catch (const noma::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kSolver;
    }
    return kOk;
}
