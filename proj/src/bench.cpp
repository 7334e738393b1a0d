#include "cirrt/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cirrt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string g9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

PlanResult run_one(const Scenario& scenario, const BenchOptions& options, std::uint64_t seed, bool inclusive) {
    PlannerConfig config = make_config(scenario);
    config.rng_seed = seed;
    config.budget = options.budget;
    config.collision_inclusive = inclusive;
    config.checkpoints = options.checkpoints;
    Planner planner(scenario.start, scenario.goal, scenario.obstacles, std::move(config));
    return planner.plan();
}

void append_records(BenchResult& bench, const PlanResult& result, int trial, bool inclusive) {
    for (const Checkpoint& cp : result.checkpoints) {
        BenchRecord record;
        record.trial = trial;
        record.inclusive = inclusive;
        record.checkpoint = cp.at;
        if (cp.solved) record.best_traj_time = cp.t_end_best;
        record.tree_size = cp.tree_size;
        bench.records.push_back(record);
    }
    TrialStats stats;
    stats.trial = trial;
    stats.inclusive = inclusive;
    stats.solved = result.solved();
    stats.best_time = result.solved() ? result.tree.t_end_best : kInf;
    stats.tree_size = result.tree.size();
    for (const PlanNode& node : result.tree.nodes) {
        if (node.kind == NodeKind::Collision) ++stats.collision_nodes;
    }
    bench.stats.push_back(stats);
}

double log_choose(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

}  // namespace

BenchResult run_bench(const Scenario& scenario, const BenchOptions& options) {
    if (options.trials < 1) throw std::invalid_argument("bench: trials must be >= 1");
    if (options.checkpoints.empty()) throw std::invalid_argument("bench: at least one checkpoint required");
    if (!std::is_sorted(options.checkpoints.begin(), options.checkpoints.end())) {
        throw std::invalid_argument("bench: checkpoints must be ascending");
    }
    for (const double cp : options.checkpoints) {
        if (!(cp > 0.0) || cp > options.budget.value) {
            throw std::invalid_argument("bench: checkpoints must lie in (0, budget]");
        }
    }

    BenchResult bench;
    bench.records.reserve(static_cast<std::size_t>(options.trials) * options.checkpoints.size() * 2);
    for (int trial = 0; trial < options.trials; ++trial) {
        const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(trial);
        append_records(bench, run_one(scenario, options, seed, true), trial, true);
        append_records(bench, run_one(scenario, options, seed, false), trial, false);
    }
    return bench;
}

void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
    out << "trial,mode,checkpoint_time,best_traj_time,tree_size\n";
    for (const BenchRecord& record : records) {
        out << record.trial << ',' << (record.inclusive ? "inclusive" : "exclusive") << ','
            << g9(record.checkpoint) << ',';
        if (record.best_traj_time) out << g9(*record.best_traj_time);
        out << ',' << record.tree_size << '\n';
    }
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double paired_sign_test_p(const std::vector<double>& inclusive_times, const std::vector<double>& exclusive_times) {
    if (inclusive_times.size() != exclusive_times.size()) {
        throw std::invalid_argument("sign test: mismatched pair counts");
    }
    int wins = 0, losses = 0;
    for (std::size_t i = 0; i < inclusive_times.size(); ++i) {
        const double a = inclusive_times[i], b = exclusive_times[i];
        if (a < b) {
            ++wins;
        } else if (a > b) {
            ++losses;
        }
    }
    const int n = wins + losses;
    if (n == 0) return 1.0;
    double p = 0.0;
    for (int j = wins; j <= n; ++j) p += std::exp(log_choose(n, j) - n * std::log(2.0));
    return std::min(p, 1.0);
}

std::string bench_summary_text(const BenchResult& bench, const BenchOptions& options) {
    std::ostringstream out;
    const char* unit = options.budget.kind == Budget::Kind::Iterations ? "iterations" : "seconds";
    out << "trials: " << options.trials << "   budget: " << g9(options.budget.value) << ' ' << unit
        << "   seed: " << options.seed << "\n\n";
    out << "checkpoint  med_best_time_incl  med_best_time_excl  med_tree_incl  med_tree_excl  solved_incl  solved_excl\n";

    for (const double cp : options.checkpoints) {
        std::vector<double> best_incl, best_excl, tree_incl, tree_excl;
        int solved_incl = 0, solved_excl = 0;
        for (const BenchRecord& record : bench.records) {
            if (record.checkpoint != cp) continue;
            auto& best = record.inclusive ? best_incl : best_excl;
            auto& tree = record.inclusive ? tree_incl : tree_excl;
            best.push_back(record.best_traj_time ? *record.best_traj_time : kInf);
            tree.push_back(static_cast<double>(record.tree_size));
            if (record.best_traj_time) ++(record.inclusive ? solved_incl : solved_excl);
        }
        const auto fmt_med = [](double m) { return std::isfinite(m) ? g9(m) : std::string("unsolved"); };
        out << g9(cp) << "  " << fmt_med(median(best_incl)) << "  " << fmt_med(median(best_excl)) << "  "
            << g9(median(tree_incl)) << "  " << g9(median(tree_excl)) << "  " << solved_incl << "  " << solved_excl
            << "\n";
    }

    // final-checkpoint paired comparison
    const double final_cp = options.checkpoints.back();
    std::vector<double> incl(static_cast<std::size_t>(options.trials), kInf);
    std::vector<double> excl(static_cast<std::size_t>(options.trials), kInf);
    for (const BenchRecord& record : bench.records) {
        if (record.checkpoint != final_cp || !record.best_traj_time) continue;
        auto& series = record.inclusive ? incl : excl;
        series[static_cast<std::size_t>(record.trial)] = *record.best_traj_time;
    }
    out << "\nsign test (inclusive shorter at final checkpoint): p = " << g9(paired_sign_test_p(incl, excl)) << "\n";
    return out.str();
}

}  // namespace cirrt
