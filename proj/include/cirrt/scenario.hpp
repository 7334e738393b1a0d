#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cirrt/planner.hpp"

namespace cirrt {

/// One planning problem: workspace bounds, obstacles, endpoint states, and the
/// physical parameters of the vehicle and impact model.
struct Scenario {
    std::string name{"unnamed"};
    std::optional<double> fixed_z;  // set for planar problems
    Bounds3 position_bounds;
    Bounds3 velocity_bounds{{-3.0, -3.0, -3.0}, {3.0, 3.0, 3.0}};
    Bounds3 acceleration_bounds{{-2.0, -2.0, -2.0}, {2.0, 2.0, 2.0}};
    std::vector<ConvexObstacle> obstacles;
    VehicleState start;
    VehicleState goal;
    double t_end_init{0.0};  // 0 requests the documented heuristic default
    double goal_sampling_rate{0.05};
    FeasibilityLimits feasibility;
    CollisionParams collision;
    double r_veh{0.0};
};

/// Parse/validation failure carrying the offending field path.
class ScenarioError : public std::runtime_error {
  public:
    ScenarioError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

/// Heuristic overestimate of the shortest feasible trajectory time:
/// 4 * (start-goal distance) / (largest velocity bound) + 4 s.
double default_t_end_init(const Scenario& scenario);

/// Throws ScenarioError naming the first violated field.
void validate(const Scenario& scenario);

Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario_text(write_scenario(s)) reproduces s
/// exactly (17 significant digits).
std::string write_scenario(const Scenario& scenario);

/// Copies the scenario's bounds and physical parameters into a planner
/// configuration; mode, seed, budget, and checkpoints stay at their defaults.
PlannerConfig make_config(const Scenario& scenario);

}  // namespace cirrt
