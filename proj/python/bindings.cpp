#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <array>
#include <vector>

#include "cirrt/bench.hpp"
#include "cirrt/scenario.hpp"
#include "cirrt/trajectory_io.hpp"

namespace py = pybind11;
using namespace cirrt;

namespace {

// flat row for easy inspection from python: t, p, v, a, segment, impact
using Row = std::array<double, 12>;

struct PlanOutcome {
    bool solved{false};
    double best_time{0.0};
    std::size_t tree_size{0};
    std::size_t collision_nodes{0};
    std::uint64_t iterations{0};
    std::uint64_t inserted{0};
    std::vector<Row> samples;
};

PlanOutcome plan_scenario(const Scenario& scenario, const std::string& mode, std::uint64_t iterations,
                          std::uint64_t seed, double sample_rate_hz) {
    PlannerConfig config = make_config(scenario);
    config.rng_seed = seed;
    config.budget = Budget::iterations(iterations);
    config.collision_inclusive = (mode == "inclusive");

    Planner planner(scenario.start, scenario.goal, scenario.obstacles, std::move(config));
    const PlanResult result = planner.plan();

    PlanOutcome outcome;
    outcome.solved = result.solved();
    outcome.best_time = result.tree.t_end_best;
    outcome.tree_size = result.tree.size();
    outcome.iterations = result.iterations;
    outcome.inserted = result.inserted;
    for (const PlanNode& node : result.tree.nodes) {
        if (node.kind == NodeKind::Collision) ++outcome.collision_nodes;
    }
    if (outcome.solved && sample_rate_hz > 0.0) {
        for (const SampleRow& row : sample_trajectory(extract_best_trajectory(result.tree), sample_rate_hz)) {
            outcome.samples.push_back(Row{row.t, row.state.position.x, row.state.position.y, row.state.position.z,
                                          row.state.velocity.x, row.state.velocity.y, row.state.velocity.z,
                                          row.state.acceleration.x, row.state.acceleration.y,
                                          row.state.acceleration.z, static_cast<double>(row.segment_id),
                                          row.impact ? 1.0 : 0.0});
        }
    }
    return outcome;
}

}  // namespace

PYBIND11_MODULE(cirrt, m) {
    m.doc() = "Collision-inclusive kinodynamic RRT* planning toolkit";

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"))
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z)
        .def("__repr__", [](const Vec3& v) {
            return "Vec3(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ", " + std::to_string(v.z) + ")";
        });

    py::class_<VehicleState>(m, "VehicleState")
        .def(py::init<Vec3, Vec3, Vec3>(), py::arg("position"), py::arg("velocity"), py::arg("acceleration"))
        .def_readwrite("position", &VehicleState::position)
        .def_readwrite("velocity", &VehicleState::velocity)
        .def_readwrite("acceleration", &VehicleState::acceleration);

    py::class_<AxisAlignedBox>(m, "AxisAlignedBox")
        .def(py::init<Vec3, Vec3>(), py::arg("min_corner"), py::arg("max_corner"))
        .def_readwrite("min_corner", &AxisAlignedBox::min_corner)
        .def_readwrite("max_corner", &AxisAlignedBox::max_corner);

    py::class_<Sphere>(m, "Sphere")
        .def(py::init<Vec3, double>(), py::arg("center"), py::arg("radius"))
        .def_readwrite("center", &Sphere::center)
        .def_readwrite("radius", &Sphere::radius);

    py::class_<Plane>(m, "Plane")
        .def_readonly("normal", &Plane::normal)
        .def_readonly("offset", &Plane::offset);

    m.def("contains", &contains, py::arg("obstacle"), py::arg("point"));
    m.def("signed_distance", &signed_distance, py::arg("obstacle"), py::arg("point"));
    m.def("closest_point", &closest_point, py::arg("obstacle"), py::arg("point"));
    m.def("separation_plane", &separation_plane, py::arg("obstacle"), py::arg("point"));
    m.def("inflate", &inflate, py::arg("obstacle"), py::arg("margin"));

    py::class_<FeasibilityLimits>(m, "FeasibilityLimits")
        .def(py::init<>())
        .def_readwrite("f_min", &FeasibilityLimits::f_min)
        .def_readwrite("f_max", &FeasibilityLimits::f_max)
        .def_readwrite("omega_max", &FeasibilityLimits::omega_max)
        .def_readwrite("gravity", &FeasibilityLimits::gravity);

    py::class_<MotionPrimitive>(m, "MotionPrimitive")
        .def_readonly("t0", &MotionPrimitive::t0)
        .def_readonly("tf", &MotionPrimitive::tf)
        .def_readonly("a0", &MotionPrimitive::a0)
        .def_readonly("a1", &MotionPrimitive::a1)
        .def_readonly("a2", &MotionPrimitive::a2)
        .def_readonly("initial_state", &MotionPrimitive::initial_state)
        .def("duration", &MotionPrimitive::duration);

    m.def("generate_primitive", &generate_primitive, py::arg("s0"), py::arg("t0"), py::arg("sf"), py::arg("tf"));
    m.def("evaluate", &evaluate, py::arg("primitive"), py::arg("t"), py::arg("order"));
    m.def("state_at", &state_at, py::arg("primitive"), py::arg("t"));
    m.def("cost", &cost, py::arg("primitive"));
    m.def("input_feasible", &input_feasible, py::arg("primitive"), py::arg("limits") = FeasibilityLimits{});

    py::class_<CollisionParams>(m, "CollisionParams")
        .def(py::init<>())
        .def_readwrite("restitution_e", &CollisionParams::restitution_e)
        .def_readwrite("kappa", &CollisionParams::kappa)
        .def_readwrite("time_threshold", &CollisionParams::time_threshold);

    py::class_<CollisionReport>(m, "CollisionReport")
        .def_readonly("hit", &CollisionReport::hit)
        .def_readonly("time", &CollisionReport::time)
        .def_readonly("obstacle_index", &CollisionReport::obstacle_index)
        .def_readonly("surface_normal", &CollisionReport::surface_normal);

    m.def(
        "collision_free",
        [](const MotionPrimitive& p, const std::vector<ConvexObstacle>& obstacles, const CollisionParams& params) {
            return collision_free(p, obstacles, params);
        },
        py::arg("primitive"), py::arg("obstacles"), py::arg("params") = CollisionParams{});
    m.def(
        "collision_time",
        [](const MotionPrimitive& p, const std::vector<ConvexObstacle>& obstacles, const CollisionParams& params) {
            return collision_time(p, obstacles, params);
        },
        py::arg("primitive"), py::arg("obstacles"), py::arg("params") = CollisionParams{});
    m.def("collision_model", &collision_model, py::arg("state"), py::arg("surface_normal"),
          py::arg("params") = CollisionParams{});

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readonly("start", &Scenario::start)
        .def_readonly("goal", &Scenario::goal)
        .def_readonly("obstacles", &Scenario::obstacles)
        .def_readonly("t_end_init", &Scenario::t_end_init)
        .def_readonly("goal_sampling_rate", &Scenario::goal_sampling_rate)
        .def_readonly("r_veh", &Scenario::r_veh);

    m.def("parse_scenario", [](const std::string& path) { return parse_scenario(path); }, py::arg("path"));
    m.def("write_scenario", &write_scenario, py::arg("scenario"));

    py::class_<PlanOutcome>(m, "PlanOutcome")
        .def_readonly("solved", &PlanOutcome::solved)
        .def_readonly("best_time", &PlanOutcome::best_time)
        .def_readonly("tree_size", &PlanOutcome::tree_size)
        .def_readonly("collision_nodes", &PlanOutcome::collision_nodes)
        .def_readonly("iterations", &PlanOutcome::iterations)
        .def_readonly("inserted", &PlanOutcome::inserted)
        .def_readonly("samples", &PlanOutcome::samples);

    m.def("plan", &plan_scenario, py::arg("scenario"), py::arg("mode") = "inclusive",
          py::arg("iterations") = 2000, py::arg("seed") = 0, py::arg("sample_rate_hz") = 100.0,
          "Run the planner on a scenario with an iteration budget and return a summary "
          "with dense samples of the best trajectory.");

    py::register_exception<ScenarioError>(m, "ScenarioError");
}
