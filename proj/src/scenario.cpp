#include "cirrt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cirrt {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(const Vec3& v) { return fmt(v.x) + " " + fmt(v.y) + " " + fmt(v.z); }

struct LineParser {
    std::istringstream in;
    std::string key;
    int line_no;

    explicit LineParser(const std::string& line, int line_no_) : in(line), line_no(line_no_) {}

    std::string field() const { return key + " (line " + std::to_string(line_no) + ")"; }

    double number() {
        double v;
        if (!(in >> v) || !std::isfinite(v)) throw ScenarioError(field(), "expected a finite number");
        return v;
    }

    Vec3 vec3() {
        const double x = number(), y = number(), z = number();
        return {x, y, z};
    }

    std::string word() {
        std::string w;
        if (!(in >> w)) throw ScenarioError(field(), "expected a token");
        return w;
    }

    void finish() {
        std::string extra;
        if (in >> extra) throw ScenarioError(field(), "unexpected trailing token '" + extra + "'");
    }
};

void check_bounds(const Bounds3& b, const std::string& field) {
    if (!is_finite(b.lo) || !is_finite(b.hi)) throw ScenarioError(field, "non-finite bound");
    if (b.lo.x > b.hi.x || b.lo.y > b.hi.y || b.lo.z > b.hi.z) {
        throw ScenarioError(field, "lower bound exceeds upper bound");
    }
}

void check_state_in_bounds(const VehicleState& s, const Scenario& scenario, const std::string& who) {
    if (!bounds_contain(scenario.position_bounds, s.position)) {
        throw ScenarioError(who + ".position", "outside position_bounds");
    }
    if (!bounds_contain(scenario.velocity_bounds, s.velocity)) {
        throw ScenarioError(who + ".velocity", "outside velocity_bounds");
    }
    if (!bounds_contain(scenario.acceleration_bounds, s.acceleration)) {
        throw ScenarioError(who + ".acceleration", "outside acceleration_bounds");
    }
}

}  // namespace

double default_t_end_init(const Scenario& scenario) {
    const Bounds3& vb = scenario.velocity_bounds;
    const double v_max = std::max({std::abs(vb.lo.x), std::abs(vb.hi.x), std::abs(vb.lo.y), std::abs(vb.hi.y),
                                   std::abs(vb.lo.z), std::abs(vb.hi.z), 0.1});
    return 4.0 * norm(scenario.goal.position - scenario.start.position) / v_max + 4.0;
}

void validate(const Scenario& scenario) {
    if (scenario.name.empty()) throw ScenarioError("name", "must not be empty");
    check_bounds(scenario.position_bounds, "position_bounds");
    check_bounds(scenario.velocity_bounds, "velocity_bounds");
    check_bounds(scenario.acceleration_bounds, "acceleration_bounds");
    if (scenario.position_bounds.lo == scenario.position_bounds.hi) {
        throw ScenarioError("position_bounds", "missing or degenerate");
    }

    for (std::size_t i = 0; i < scenario.obstacles.size(); ++i) {
        try {
            cirrt::validate(scenario.obstacles[i]);
        } catch (const std::invalid_argument& e) {
            throw ScenarioError("obstacles[" + std::to_string(i) + "]", e.what());
        }
    }

    if (!is_finite(scenario.start)) throw ScenarioError("start", "non-finite component");
    if (!is_finite(scenario.goal)) throw ScenarioError("goal", "non-finite component");
    check_state_in_bounds(scenario.start, scenario, "start");
    check_state_in_bounds(scenario.goal, scenario, "goal");

    const FeasibilityLimits& fl = scenario.feasibility;
    if (!(fl.f_min >= 0.0)) throw ScenarioError("f_min", "must be >= 0");
    if (!(fl.f_max > fl.f_min)) throw ScenarioError("f_max", "must exceed f_min");
    if (!(fl.omega_max > 0.0)) throw ScenarioError("omega_max", "must be positive");
    if (!is_finite(fl.gravity)) throw ScenarioError("gravity", "non-finite component");

    const CollisionParams& cp = scenario.collision;
    if (!(cp.restitution_e > 0.0 && cp.restitution_e <= 1.0)) {
        throw ScenarioError("restitution", "must be in (0, 1]");
    }
    if (!(cp.kappa >= 0.0)) throw ScenarioError("kappa", "must be >= 0");
    if (!(cp.time_threshold > 0.0)) throw ScenarioError("time_threshold", "must be positive");

    if (!(scenario.r_veh >= 0.0)) throw ScenarioError("r_veh", "must be >= 0");
    if (!(scenario.goal_sampling_rate >= 0.0 && scenario.goal_sampling_rate <= 1.0)) {
        throw ScenarioError("goal_sampling_rate", "must be in [0, 1]");
    }
    if (!(scenario.t_end_init >= 0.0)) throw ScenarioError("t_end_init", "must be positive (or omitted)");

    if (scenario.fixed_z) {
        const double z = *scenario.fixed_z;
        const auto planar = [&](const VehicleState& s, const std::string& who) {
            if (std::abs(s.position.z - z) > 1e-9) throw ScenarioError(who + ".position", "z must equal embedding z");
            if (std::abs(s.velocity.z) > 1e-9 || std::abs(s.acceleration.z) > 1e-9) {
                throw ScenarioError(who, "z velocity and acceleration must be zero in a 2d embedding");
            }
        };
        planar(scenario.start, "start");
        planar(scenario.goal, "goal");
    }

    for (std::size_t i = 0; i < scenario.obstacles.size(); ++i) {
        if (contains(inflate(scenario.obstacles[i], scenario.r_veh), scenario.start.position)) {
            throw ScenarioError("start", "inside inflated obstacles[" + std::to_string(i) + "]");
        }
    }
}

Scenario parse_scenario_text(const std::string& text) {
    Scenario scenario;
    scenario.name.clear();
    bool saw_start = false, saw_goal = false, saw_bounds = false;

    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream probe(line);
        std::string key;
        if (!(probe >> key)) continue;

        LineParser p(line, line_no);
        p.key = p.word();

        if (key == "name") {
            scenario.name = p.word();
        } else if (key == "embedding") {
            const std::string mode = p.word();
            if (mode == "3d") {
                scenario.fixed_z.reset();
            } else if (mode == "2d") {
                scenario.fixed_z = p.number();
            } else {
                throw ScenarioError(p.field(), "expected '3d' or '2d <z>'");
            }
        } else if (key == "position_bounds") {
            scenario.position_bounds = {p.vec3(), p.vec3()};
            saw_bounds = true;
        } else if (key == "velocity_bounds") {
            scenario.velocity_bounds = {p.vec3(), p.vec3()};
        } else if (key == "acceleration_bounds") {
            scenario.acceleration_bounds = {p.vec3(), p.vec3()};
        } else if (key == "start") {
            scenario.start = {p.vec3(), p.vec3(), p.vec3()};
            saw_start = true;
        } else if (key == "goal") {
            scenario.goal = {p.vec3(), p.vec3(), p.vec3()};
            saw_goal = true;
        } else if (key == "box") {
            const Vec3 lo = p.vec3();
            const Vec3 hi = p.vec3();
            scenario.obstacles.push_back(AxisAlignedBox{lo, hi});
        } else if (key == "sphere") {
            const Vec3 center = p.vec3();
            scenario.obstacles.push_back(Sphere{center, p.number()});
        } else if (key == "t_end_init") {
            scenario.t_end_init = p.number();
        } else if (key == "goal_sampling_rate") {
            scenario.goal_sampling_rate = p.number();
        } else if (key == "f_min") {
            scenario.feasibility.f_min = p.number();
        } else if (key == "f_max") {
            scenario.feasibility.f_max = p.number();
        } else if (key == "omega_max") {
            scenario.feasibility.omega_max = p.number();
        } else if (key == "gravity") {
            scenario.feasibility.gravity = p.vec3();
        } else if (key == "restitution") {
            scenario.collision.restitution_e = p.number();
        } else if (key == "kappa") {
            scenario.collision.kappa = p.number();
        } else if (key == "time_threshold") {
            scenario.collision.time_threshold = p.number();
        } else if (key == "r_veh") {
            scenario.r_veh = p.number();
        } else {
            throw ScenarioError(key + " (line " + std::to_string(line_no) + ")", "unknown field");
        }
        p.finish();
    }

    if (scenario.name.empty()) throw ScenarioError("name", "missing");
    if (!saw_bounds) throw ScenarioError("position_bounds", "missing");
    if (!saw_start) throw ScenarioError("start", "missing");
    if (!saw_goal) throw ScenarioError("goal", "missing");

    if (scenario.t_end_init == 0.0) scenario.t_end_init = default_t_end_init(scenario);

    validate(scenario);
    return scenario;
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open scenario file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

std::string write_scenario(const Scenario& scenario) {
    std::ostringstream out;
    out << "name " << scenario.name << "\n";
    if (scenario.fixed_z) {
        out << "embedding 2d " << fmt(*scenario.fixed_z) << "\n";
    } else {
        out << "embedding 3d\n";
    }
    out << "position_bounds " << fmt(scenario.position_bounds.lo) << "  " << fmt(scenario.position_bounds.hi) << "\n";
    out << "velocity_bounds " << fmt(scenario.velocity_bounds.lo) << "  " << fmt(scenario.velocity_bounds.hi) << "\n";
    out << "acceleration_bounds " << fmt(scenario.acceleration_bounds.lo) << "  "
        << fmt(scenario.acceleration_bounds.hi) << "\n";
    out << "start " << fmt(scenario.start.position) << "  " << fmt(scenario.start.velocity) << "  "
        << fmt(scenario.start.acceleration) << "\n";
    out << "goal " << fmt(scenario.goal.position) << "  " << fmt(scenario.goal.velocity) << "  "
        << fmt(scenario.goal.acceleration) << "\n";
    for (const ConvexObstacle& obstacle : scenario.obstacles) {
        if (const auto* box = std::get_if<AxisAlignedBox>(&obstacle)) {
            out << "box " << fmt(box->min_corner) << "  " << fmt(box->max_corner) << "\n";
        } else {
            const auto& sphere = std::get<Sphere>(obstacle);
            out << "sphere " << fmt(sphere.center) << "  " << fmt(sphere.radius) << "\n";
        }
    }
    out << "t_end_init " << fmt(scenario.t_end_init) << "\n";
    out << "goal_sampling_rate " << fmt(scenario.goal_sampling_rate) << "\n";
    out << "f_min " << fmt(scenario.feasibility.f_min) << "\n";
    out << "f_max " << fmt(scenario.feasibility.f_max) << "\n";
    out << "omega_max " << fmt(scenario.feasibility.omega_max) << "\n";
    out << "gravity " << fmt(scenario.feasibility.gravity) << "\n";
    out << "restitution " << fmt(scenario.collision.restitution_e) << "\n";
    out << "kappa " << fmt(scenario.collision.kappa) << "\n";
    out << "time_threshold " << fmt(scenario.collision.time_threshold) << "\n";
    out << "r_veh " << fmt(scenario.r_veh) << "\n";
    return out.str();
}

PlannerConfig make_config(const Scenario& scenario) {
    PlannerConfig config;
    config.goal_sampling_rate = scenario.goal_sampling_rate;
    config.position_bounds = scenario.position_bounds;
    config.velocity_bounds = scenario.velocity_bounds;
    config.acceleration_bounds = scenario.acceleration_bounds;
    config.t_end_init = scenario.t_end_init > 0.0 ? scenario.t_end_init : default_t_end_init(scenario);
    config.feasibility = scenario.feasibility;
    config.collision = scenario.collision;
    config.r_veh = scenario.r_veh;
    config.fixed_z = scenario.fixed_z;
    return config;
}

}  // namespace cirrt
