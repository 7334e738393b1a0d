#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cirrt/scenario.hpp"

namespace cirrt {

struct BenchRecord {
    int trial{0};
    bool inclusive{true};
    double checkpoint{0.0};  // iterations or seconds, matching the budget kind
    std::optional<double> best_traj_time;
    std::size_t tree_size{0};
};

struct TrialStats {
    int trial{0};
    bool inclusive{true};
    bool solved{false};
    double best_time{0.0};
    std::size_t tree_size{0};
    std::size_t collision_nodes{0};
};

struct BenchOptions {
    int trials{1};
    Budget budget;
    std::vector<double> checkpoints;  // must be sorted and within the budget
    std::uint64_t seed{0};
};

struct BenchResult {
    std::vector<BenchRecord> records;  // ordered by (trial, inclusive-first, checkpoint)
    std::vector<TrialStats> stats;
};

/// Paired trials: trial i runs both modes from the identical seed, so the two
/// random streams match until the first mode-divergent decision.
BenchResult run_bench(const Scenario& scenario, const BenchOptions& options);

/// Header trial,mode,checkpoint_time,best_traj_time,tree_size; the best-time
/// field is empty while unsolved. 9 significant digits.
void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out);

/// Median with the usual midpoint rule; unsolved entries rank as +infinity.
double median(std::vector<double> values);

/// One-sided paired sign test that the inclusive planner finds shorter
/// trajectories: p = P[Binomial(wins + losses, 1/2) >= wins]. Ties drop out;
/// an unsolved trial counts as +infinity.
double paired_sign_test_p(const std::vector<double>& inclusive_times, const std::vector<double>& exclusive_times);

/// Per-checkpoint medians for both modes plus the final-checkpoint sign test.
std::string bench_summary_text(const BenchResult& bench, const BenchOptions& options);

}  // namespace cirrt
