// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Scenario directory comes as argv[1].
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cirrt/bench.hpp"
#include "cirrt/scenario.hpp"
#include "cirrt/trajectory_io.hpp"
#include "oracles.hpp"

using namespace cirrt;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << what;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

VehicleState rest_at(double x, double y, double z) { return {{x, y, z}, {0, 0, 0}, {0, 0, 0}}; }

// ---------------------------------------------------------------- criterion 1
void criterion_primitives() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> duration(0.1, 10.0);

    std::size_t endpoint_misses = 0;
    for (int i = 0; i < 10000; ++i) {
        const VehicleState s0 = oracle::random_state(rng, 5.0, 3.0, 2.0);
        const VehicleState sf = oracle::random_state(rng, 5.0, 3.0, 2.0);
        const double T = duration(rng);
        const MotionPrimitive p = generate_primitive(s0, 0.0, sf, T);
        const auto ok = [&](const Vec3& got, const Vec3& want) {
            const auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9 + 1e-9 * std::abs(b); };
            return near(got.x, want.x) && near(got.y, want.y) && near(got.z, want.z);
        };
        if (!ok(evaluate(p, 0.0, 0), s0.position) || !ok(evaluate(p, 0.0, 1), s0.velocity) ||
            !ok(evaluate(p, 0.0, 2), s0.acceleration) || !ok(evaluate(p, T, 0), sf.position) ||
            !ok(evaluate(p, T, 1), sf.velocity) || !ok(evaluate(p, T, 2), sf.acceleration)) {
            ++endpoint_misses;
        }
    }

    std::size_t cost_misses = 0;
    std::uniform_real_distribution<double> d_range(0.05, 10.0), t_range(0.1, 8.0);
    for (int i = 0; i < 500; ++i) {
        const double d = d_range(rng), T = t_range(rng);
        const MotionPrimitive p = generate_primitive(rest_at(0, 0, 0), 0.0, rest_at(d, 0, 0), T);
        const double closed = cost(p);
        const double law = 720.0 * d * d / std::pow(T, 5);
        const double quadrature = oracle::simpson_jerk_cost(p, 10000);
        if (std::abs(closed - law) > 1e-9 * law) ++cost_misses;
        if (std::abs(closed - quadrature) > 1e-6 * std::max(closed, quadrature)) ++cost_misses;
    }

    const double elapsed = seconds_since(t0);
    std::ostringstream detail;
    detail << "10000 endpoint triples, 500 rest-to-rest costs, " << elapsed << " s";
    report(1, endpoint_misses == 0 && cost_misses == 0 && elapsed < 10.0,
           "primitive boundary conditions exact, closed-form cost matches 720 D^2/T^5 and quadrature",
           detail.str());
}

// ---------------------------------------------------------------- criterion 2
void criterion_throughput() {
    std::mt19937_64 rng(1002);
    std::uniform_real_distribution<double> duration(0.3, 5.0);
    const FeasibilityLimits limits;

    constexpr int kPairs = 4096;
    std::vector<VehicleState> from(kPairs), to(kPairs);
    std::vector<double> T(kPairs);
    for (int i = 0; i < kPairs; ++i) {
        from[static_cast<std::size_t>(i)] = oracle::random_state(rng, 4.0, 3.0, 2.0);
        to[static_cast<std::size_t>(i)] = oracle::random_state(rng, 4.0, 3.0, 2.0);
        T[static_cast<std::size_t>(i)] = duration(rng);
    }

    constexpr std::uint64_t kEvals = 200000;
    double checksum = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t i = 0; i < kEvals; ++i) {
        const auto k = static_cast<std::size_t>(i & (kPairs - 1));
        const MotionPrimitive p = generate_primitive(from[k], 0.0, to[k], T[k]);
        checksum += cost(p) > 1.0 ? 1.0 : 0.0;
        checksum += input_feasible(p, limits) ? 1.0 : 0.0;
    }
    const double elapsed = seconds_since(t0);
    const double rate = kEvals / elapsed;

    std::ostringstream detail;
    detail << static_cast<std::uint64_t>(rate) << " generate+cost+check per second, checksum " << checksum;
    report(2, rate >= 1e5, "single-threaded primitive pipeline throughput >= 1e5 evaluations/s", detail.str());
}

// ---------------------------------------------------------------- criterion 3
void criterion_collision_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1003);
    std::uniform_real_distribution<double> duration(0.2, 4.0);
    const CollisionParams params;

    std::size_t compared = 0, hits = 0, classification_misses = 0, time_misses = 0;
    for (int i = 0; i < 10000; ++i) {
        const MotionPrimitive p = generate_primitive(oracle::random_state(rng, 3.0, 2.0, 1.5), 0.0,
                                                     oracle::random_state(rng, 3.0, 2.0, 1.5), duration(rng));
        const std::vector<ConvexObstacle> obstacles{oracle::random_obstacle(rng, {-2, -2, -2}, {2, 2, 2})};
        const oracle::CollisionScan scan = oracle::scan_collision(p, obstacles, 1e-4, p.t0, p.tf);
        if (std::abs(scan.min_distance) < 1e-3) continue;  // boundary-margin band
        ++compared;

        const bool free = collision_free(p, obstacles, params);
        const CollisionReport rep = collision_time(p, obstacles, params);
        if (free == scan.first_hit.has_value() || rep.hit != scan.first_hit.has_value()) {
            ++classification_misses;
            continue;
        }
        if (rep.hit) {
            ++hits;
            if (std::abs(rep.time - *scan.first_hit) > params.time_threshold + 2e-4) ++time_misses;
        }
    }

    const double elapsed = seconds_since(t0);
    std::ostringstream detail;
    detail << compared << " cases outside the band, " << hits << " collisions, " << classification_misses
           << " classification misses, " << time_misses << " time misses, " << elapsed << " s";
    report(3, classification_misses == 0 && time_misses == 0 && compared > 5000 && hits > 500 && elapsed < 60.0,
           "detector matches the dt=1e-4 dense oracle outside the 1 mm band", detail.str());
}

// ---------------------------------------------------------------- criterion 4
void criterion_impact_model() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1004);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> speed(0.01, 8.0);
    const CollisionParams params;  // e = 0.43, kappa = 0.20
    const double max_reduction = params.kappa * (1.0 + params.restitution_e);

    std::size_t misses = 0;
    for (int i = 0; i < 100000; ++i) {
        Vec3 n{gauss(rng), gauss(rng), gauss(rng)};
        if (norm(n) < 1e-9) continue;
        n = normalized(n);
        Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
        v = v * speed(rng);
        if (dot(v, n) >= -1e-6) v -= n * (2.0 * std::max(0.1, dot(v, n)) + 0.2);

        const VehicleState pre{{0, 0, 0}, v, {1, -1, 0.5}};
        const VehicleState post = collision_model(pre, n, params);

        const double vn = dot(v, n);
        const double vn_post = dot(post.velocity, n);
        const double vt = norm(v - n * vn);
        const double vt_post = norm(post.velocity - n * vn_post);

        bool ok = std::abs(vn_post + params.restitution_e * vn) <= 1e-12 * std::max(1.0, std::abs(vn));
        ok = ok && vn_post > 0.0;
        ok = ok && vt_post <= vt + 1e-12;
        ok = ok && (vt < 1e-8 || vt_post >= vt * (1.0 - max_reduction) - 1e-12);
        ok = ok && norm_sq(post.velocity) < norm_sq(v);
        ok = ok && post.position == pre.position;
        ok = ok && post.acceleration == Vec3{0, 0, 0};
        if (!ok) ++misses;
    }

    const double elapsed = seconds_since(t0);
    std::ostringstream detail;
    detail << "100000 random impacts, " << misses << " violations, " << elapsed << " s";
    report(4, misses == 0 && elapsed < 5.0,
           "impact model: exact normal scaling, bounded tangential reduction, energy loss", detail.str());
}

// ---------------------------------------------------------------- criterion 5
struct StructuralScenario {
    std::string name;
    VehicleState start;
    VehicleState goal;
    std::vector<ConvexObstacle> obstacles;
    PlannerConfig config;
};

std::vector<StructuralScenario> structural_scenarios(const Scenario& tunnel) {
    std::vector<StructuralScenario> out;

    StructuralScenario hop;
    hop.name = "open_hop";
    hop.start = rest_at(0, 0, 1);
    hop.goal = rest_at(2, 0, 1);
    hop.config.position_bounds = {{-1, -1, 0}, {3, 1, 2}};
    hop.config.t_end_init = 8.0;
    out.push_back(hop);

    StructuralScenario tun;
    tun.name = "tunnel";
    tun.start = tunnel.start;
    tun.goal = tunnel.goal;
    tun.obstacles = tunnel.obstacles;
    tun.config = make_config(tunnel);
    out.push_back(tun);

    StructuralScenario field;
    field.name = "sphere_field";
    field.start = rest_at(-2, 0, 1);
    field.goal = rest_at(2.5, 0.5, 1);
    field.obstacles = {Sphere{{0, 0, 1}, 0.6}, Sphere{{1.2, -0.8, 1}, 0.5}, Sphere{{-1.0, 0.9, 1}, 0.4},
                       AxisAlignedBox{{0.4, 0.4, 0}, {1.0, 1.2, 2}}};
    field.config.position_bounds = {{-3, -2, 0}, {3, 2, 2}};
    field.config.t_end_init = 12.0;
    out.push_back(field);

    return out;
}

void criterion_structural(const Scenario& tunnel) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto scenarios = structural_scenarios(tunnel);

    std::size_t runs = 0, audit_failures = 0;
    std::string first_failure;

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        StructuralScenario sc = scenarios[seed % scenarios.size()];
        sc.config.rng_seed = 7000 + seed;
        sc.config.budget = Budget::iterations(120);
        sc.config.collision_inclusive = (seed % 2 == 0);
        ++runs;

        Planner planner(sc.start, sc.goal, sc.obstacles, sc.config);
        std::map<NodeId, double> last_costs;
        double last_t_end = sc.config.t_end_init;
        bool run_ok = true;
        std::string why;

        planner.set_iteration_observer([&](const Planner& p, std::uint64_t iter) {
            const ExploringTree& tree = p.tree();
            const TreeAudit audit =
                audit_tree(tree, p.inflated_obstacles(), sc.config.feasibility, sc.config.collision);
            if (!audit.ok() && run_ok) {
                run_ok = false;
                why = sc.name + " iter " + std::to_string(iter) + ": " + audit.detail;
            }
            if (tree.t_end_best > last_t_end + 1e-12 && run_ok) {
                run_ok = false;
                why = sc.name + " iter " + std::to_string(iter) + ": t_end_best increased";
            }
            last_t_end = tree.t_end_best;
            for (const PlanNode& node : tree.nodes) {
                const auto it = last_costs.find(node.id);
                if (it != last_costs.end() && node.cost > it->second + 1e-9 && run_ok) {
                    run_ok = false;
                    why = sc.name + " iter " + std::to_string(iter) + ": node cost increased";
                }
                last_costs[node.id] = node.cost;
            }
        });

        const PlanResult result = planner.plan();
        if (result.solved()) {
            const double goal_time = result.tree.node(*result.tree.best_goal).time;
            if (std::abs(goal_time - result.tree.t_end_best) > 1e-12) {
                run_ok = false;
                why = sc.name + ": best goal time != t_end_best";
            }
        }
        if (!run_ok) {
            ++audit_failures;
            if (first_failure.empty()) first_failure = why;
        }
    }

    const double elapsed = seconds_since(t0);
    std::ostringstream detail;
    detail << runs << " seeded runs audited per iteration, " << elapsed << " s";
    if (!first_failure.empty()) detail << "; first failure: " << first_failure;
    report(5, audit_failures == 0,
           "tree stays acyclic, cost-consistent, time-monotone, edge-feasible; costs and t_end_best "
           "never increase",
           detail.str());
}

// ------------------------------------------------------------ criteria 6 + 7
std::uint64_t calibrate_iterations(const Scenario& tunnel) {
    const auto median_iters = [&](bool inclusive) {
        std::vector<double> iters;
        for (std::uint64_t seed = 900; seed < 905; ++seed) {
            PlannerConfig config = make_config(tunnel);
            config.rng_seed = seed;
            config.budget = Budget::wall_seconds(0.1);
            config.collision_inclusive = inclusive;
            Planner planner(tunnel.start, tunnel.goal, tunnel.obstacles, std::move(config));
            iters.push_back(static_cast<double>(planner.plan().iterations));
        }
        return median(iters);
    };
    const double incl = median_iters(true);
    const double excl = median_iters(false);
    const auto calibrated = static_cast<std::uint64_t>(std::llround(std::sqrt(incl * excl)));
    std::cout << "  calibration: median iterations in 0.1 s wall -> inclusive " << incl << ", exclusive "
              << excl << "; geometric-mean budget " << calibrated << " iterations" << std::endl;
    return std::max<std::uint64_t>(calibrated, 50);
}

void criteria_tunnel_bench(const Scenario& tunnel) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t budget = calibrate_iterations(tunnel);

    BenchOptions options;
    options.trials = 200;
    options.budget = Budget::iterations(budget);
    options.checkpoints = {std::floor(budget / 4.0), std::floor(budget / 2.0), static_cast<double>(budget)};
    options.seed = 42;

    const BenchResult bench = run_bench(tunnel, options);

    const double final_cp = options.checkpoints.back();
    std::vector<double> best_incl(200, std::numeric_limits<double>::infinity());
    std::vector<double> best_excl(200, std::numeric_limits<double>::infinity());
    std::vector<double> tree_incl, tree_excl;
    for (const BenchRecord& record : bench.records) {
        if (record.checkpoint != final_cp) continue;
        auto& best = record.inclusive ? best_incl : best_excl;
        if (record.best_traj_time) best[static_cast<std::size_t>(record.trial)] = *record.best_traj_time;
        (record.inclusive ? tree_incl : tree_excl).push_back(static_cast<double>(record.tree_size));
    }

    const double med_best_incl = median(best_incl);
    const double med_best_excl = median(best_excl);
    const double med_tree_incl = median(tree_incl);
    const double med_tree_excl = median(tree_excl);
    const double p = paired_sign_test_p(best_incl, best_excl);
    const double elapsed = seconds_since(t0);

    {
        std::ostringstream detail;
        detail << "200 paired trials at " << budget << " iterations: median best time " << med_best_incl
               << " vs " << med_best_excl << " s, sign-test p = " << p << ", median tree " << med_tree_incl
               << " vs " << med_tree_excl << ", " << elapsed << " s";
        report(6,
               med_best_incl < med_best_excl && p < 0.05 && med_tree_incl > med_tree_excl && elapsed < 900.0,
               "collision-inclusive beats exclusive on trajectory time and tree growth in the tunnel",
               detail.str());
    }

    std::vector<double> fractions;
    for (const TrialStats& stats : bench.stats) {
        if (!stats.inclusive) continue;
        fractions.push_back(static_cast<double>(stats.collision_nodes) /
                            static_cast<double>(std::max<std::size_t>(stats.tree_size, 1)));
    }
    const double med_fraction = median(fractions);
    {
        std::ostringstream detail;
        detail << "median collision-node fraction " << med_fraction << " over 200 inclusive trials";
        report(7, med_fraction > 0.5, "tunnel trees are mainly collision nodes", detail.str());
    }
}

// ---------------------------------------------------------------- criterion 8
void criterion_determinism(const Scenario& tunnel) {
    BenchOptions options;
    options.trials = 5;
    options.budget = Budget::iterations(150);
    options.checkpoints = {75, 150};
    options.seed = 321;

    const auto csv_of = [&] {
        std::ostringstream out;
        write_bench_csv(run_bench(tunnel, options).records, out);
        return out.str();
    };
    const std::string a = csv_of();
    const std::string b = csv_of();
    std::ostringstream detail;
    detail << a.size() << " bytes each";
    report(8, !a.empty() && a == b, "bench output is byte-identical across repeated runs", detail.str());
}

}  // namespace

int main(int argc, char** argv) {
    const std::string scenario_dir = argc > 1 ? argv[1] : "scenarios";
    const Scenario tunnel = parse_scenario(scenario_dir + "/tunnel.scn");

    criterion_primitives();
    criterion_throughput();
    criterion_collision_oracle();
    criterion_impact_model();
    criterion_structural(tunnel);
    criteria_tunnel_bench(tunnel);
    criterion_determinism(tunnel);

    std::cout << (g_failures == 0 ? "all criteria passed" : "criteria failed: " + std::to_string(g_failures))
              << std::endl;
    return g_failures;
}
