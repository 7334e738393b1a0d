#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cirrt/bench.hpp"
#include "cirrt/scenario.hpp"
#include "cirrt/trajectory_io.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitNoTrajectory = 2;
constexpr int kExitInvalidScenario = 3;
constexpr int kExitIo = 4;

cirrt::Budget parse_budget(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--budget", "expected iters:N or wall:S");
    const std::string kind = text.substr(0, colon);
    const std::string value = text.substr(colon + 1);
    try {
        if (kind == "iters") return cirrt::Budget::iterations(std::stoull(value));
        if (kind == "wall") return cirrt::Budget::wall_seconds(std::stod(value));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--budget", "cannot parse '" + value + "'");
    }
    throw CLI::ValidationError("--budget", "unknown budget kind '" + kind + "'");
}

std::vector<double> parse_checkpoints(const std::string& text) {
    std::vector<double> marks;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        marks.push_back(std::stod(token));
    }
    std::sort(marks.begin(), marks.end());
    return marks;
}

int run_plan(const std::string& scenario_path, const std::string& mode, const std::string& budget_text,
             std::uint64_t seed, const std::string& out_dir) {
    const cirrt::Scenario scenario = cirrt::parse_scenario(scenario_path);
    const cirrt::Budget budget = parse_budget(budget_text);

    cirrt::PlannerConfig config = cirrt::make_config(scenario);
    config.rng_seed = seed;
    config.budget = budget;
    config.collision_inclusive = (mode == "inclusive");
    config.checkpoints = {budget.value};

    cirrt::Planner planner(scenario.start, scenario.goal, scenario.obstacles, std::move(config));
    cirrt::PlanResult result = planner.plan();

    cirrt::RunArtifact artifact;
    artifact.scenario_name = scenario.name;
    artifact.mode = mode;
    artifact.seed = seed;
    artifact.budget = budget;
    const bool solved = result.solved();
    if (solved) artifact.trajectory = cirrt::extract_best_trajectory(result.tree);
    artifact.result = std::move(result);

    fs::create_directories(out_dir);
    cirrt::write_artifact(artifact, fs::path(out_dir) / "result.json");
    {
        std::ofstream summary(fs::path(out_dir) / "summary.txt");
        if (!summary) throw std::ios_base::failure("cannot write summary.txt");
        summary << cirrt::run_summary_text(artifact);
    }
    if (artifact.trajectory) {
        cirrt::write_samples_csv(cirrt::sample_trajectory(*artifact.trajectory, 1000.0),
                                 fs::path(out_dir) / "trajectory_samples.csv");
    }

    std::cout << cirrt::run_summary_text(artifact);
    return solved ? kExitOk : kExitNoTrajectory;
}

int run_bench_cmd(const std::string& scenario_path, int trials, const std::string& budget_text,
                  const std::string& checkpoints_text, std::uint64_t seed, const std::string& out_dir) {
    const cirrt::Scenario scenario = cirrt::parse_scenario(scenario_path);

    cirrt::BenchOptions options;
    options.trials = trials;
    options.budget = parse_budget(budget_text);
    options.checkpoints = parse_checkpoints(checkpoints_text);
    if (options.checkpoints.empty()) options.checkpoints = {options.budget.value};
    options.seed = seed;

    const cirrt::BenchResult bench = cirrt::run_bench(scenario, options);

    fs::create_directories(out_dir);
    {
        std::ofstream csv(fs::path(out_dir) / "bench.csv");
        if (!csv) throw std::ios_base::failure("cannot write bench.csv");
        cirrt::write_bench_csv(bench.records, csv);
    }
    const std::string summary = cirrt::bench_summary_text(bench, options);
    {
        std::ofstream out(fs::path(out_dir) / "bench_summary.txt");
        if (!out) throw std::ios_base::failure("cannot write bench_summary.txt");
        out << summary;
    }
    std::cout << summary;
    return kExitOk;
}

int run_export(const std::string& result_path, double rate_hz, const std::string& out_file) {
    cirrt::Trajectory trajectory;
    try {
        trajectory = cirrt::trajectory_from_artifact(result_path);
    } catch (const std::ios_base::failure&) {
        throw;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoTrajectory;
    }
    cirrt::write_samples_csv(cirrt::sample_trajectory(trajectory, rate_hz), fs::path(out_file));
    std::cout << "wrote " << out_file << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collision-inclusive kinodynamic RRT* planner for multicopters"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, budget_text = "iters:2000", mode = "inclusive";
    std::string checkpoints_text, result_path;
    std::uint64_t seed = 0;
    int trials = 200;
    double rate_hz = 100.0;

    CLI::App* plan = app.add_subcommand("plan", "Plan one trajectory and write the result artifact");
    plan->add_option("scenario", scenario_path, "scenario file")->required();
    plan->add_option("--mode", mode, "inclusive|exclusive")
        ->check(CLI::IsMember({"inclusive", "exclusive"}))
        ->capture_default_str();
    plan->add_option("--budget", budget_text, "iters:N or wall:S")->capture_default_str();
    plan->add_option("--seed", seed, "random seed")->capture_default_str();
    plan->add_option("--out", out_path, "output directory")->required();

    CLI::App* bench = app.add_subcommand("bench", "Paired inclusive/exclusive Monte Carlo benchmark");
    bench->add_option("scenario", scenario_path, "scenario file")->required();
    bench->add_option("--trials", trials, "paired trial count")->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--budget", budget_text, "iters:N or wall:S")->capture_default_str();
    bench->add_option("--checkpoints", checkpoints_text, "comma-separated marks in budget units");
    bench->add_option("--seed", seed, "base seed; trial i uses seed+i")->capture_default_str();
    bench->add_option("--out", out_path, "output directory")->required();

    CLI::App* exp = app.add_subcommand("export", "Resample a result artifact into a dense CSV");
    exp->add_option("result", result_path, "result.json from plan")->required();
    exp->add_option("--rate", rate_hz, "sample rate in Hz")->check(CLI::PositiveNumber)->capture_default_str();
    exp->add_option("--out", out_path, "output CSV file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan->parsed()) return run_plan(scenario_path, mode, budget_text, seed, out_path);
        if (bench->parsed()) return run_bench_cmd(scenario_path, trials, budget_text, checkpoints_text, seed, out_path);
        if (exp->parsed()) return run_export(result_path, rate_hz, out_path);
    } catch (const cirrt::ScenarioError& e) {
        std::cerr << "invalid scenario: " << e.what() << "\n";
        return kExitInvalidScenario;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid scenario: " << e.what() << "\n";
        return kExitInvalidScenario;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
