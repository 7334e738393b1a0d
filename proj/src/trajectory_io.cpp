#include "cirrt/trajectory_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cirrt {

namespace {

using nlohmann::json;

constexpr double kTimeEps = 1e-9;

std::string g9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

json to_json(const VehicleState& s) {
    return json{{"position", to_json(s.position)},
                {"velocity", to_json(s.velocity)},
                {"acceleration", to_json(s.acceleration)}};
}

VehicleState state_from(const json& j) {
    return {vec3_from(j.at("position")), vec3_from(j.at("velocity")), vec3_from(j.at("acceleration"))};
}

const char* kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::Normal: return "normal";
        case NodeKind::Goal: return "goal";
        case NodeKind::Collision: return "collision";
    }
    return "normal";
}

}  // namespace

std::vector<SampleRow> sample_trajectory(const Trajectory& trajectory, double rate_hz) {
    if (!(rate_hz > 0.0)) throw std::invalid_argument("sample_trajectory: rate_hz must be positive");
    if (trajectory.segments.empty()) throw std::invalid_argument("sample_trajectory: empty trajectory");

    struct Impact {
        double t;
        std::size_t segment;  // segment the impact starts
    };
    std::vector<Impact> impacts;
    for (std::size_t i = 0; i < trajectory.segments.size(); ++i) {
        if (trajectory.segments[i].impact_at_start) impacts.push_back({trajectory.segments[i].primitive.t0, i});
    }

    const auto near_impact = [&](double t) {
        return std::any_of(impacts.begin(), impacts.end(), [&](const Impact& im) { return std::abs(im.t - t) < kTimeEps; });
    };
    const auto segment_at = [&](double t) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < trajectory.segments.size(); ++i) {
            if (trajectory.segments[i].primitive.t0 <= t + kTimeEps) idx = i;
        }
        return idx;
    };

    const double t_begin = trajectory.segments.front().primitive.t0;
    const double t_end = trajectory.segments.back().primitive.tf;

    std::vector<SampleRow> rows;
    const auto n_grid = static_cast<std::size_t>(std::floor((t_end - t_begin) * rate_hz + kTimeEps));
    rows.reserve(n_grid + 2 * impacts.size() + 2);

    double last_grid_t = t_begin - 1.0;
    for (std::size_t k = 0; k <= n_grid; ++k) {
        const double t = std::min(t_begin + static_cast<double>(k) / rate_hz, t_end);
        if (near_impact(t)) continue;
        const std::size_t seg = segment_at(t);
        rows.push_back({t, state_at(trajectory.segments[seg].primitive, t), static_cast<int>(seg), false});
        last_grid_t = t;
    }
    if (t_end - last_grid_t > kTimeEps && !near_impact(t_end)) {
        const std::size_t seg = trajectory.segments.size() - 1;
        rows.push_back({t_end, state_at(trajectory.segments[seg].primitive, t_end), static_cast<int>(seg), false});
    }

    for (const Impact& impact : impacts) {
        const std::size_t pre_seg = impact.segment - 1;  // impacts only start non-initial segments
        rows.push_back({impact.t, state_at(trajectory.segments[pre_seg].primitive, impact.t),
                        static_cast<int>(pre_seg), true});
        rows.push_back({impact.t, state_at(trajectory.segments[impact.segment].primitive, impact.t),
                        static_cast<int>(impact.segment), true});
    }

    std::stable_sort(rows.begin(), rows.end(), [](const SampleRow& a, const SampleRow& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.segment_id < b.segment_id;
    });
    return rows;
}

void write_samples_csv(const std::vector<SampleRow>& rows, std::ostream& out) {
    out << "t,x,y,z,vx,vy,vz,ax,ay,az,segment_id,impact_flag\n";
    for (const SampleRow& row : rows) {
        const VehicleState& s = row.state;
        out << g9(row.t) << ',' << g9(s.position.x) << ',' << g9(s.position.y) << ',' << g9(s.position.z) << ','
            << g9(s.velocity.x) << ',' << g9(s.velocity.y) << ',' << g9(s.velocity.z) << ',' << g9(s.acceleration.x)
            << ',' << g9(s.acceleration.y) << ',' << g9(s.acceleration.z) << ',' << row.segment_id << ','
            << (row.impact ? 1 : 0) << '\n';
    }
}

void write_samples_csv(const std::vector<SampleRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot write " + path.string());
    write_samples_csv(rows, out);
}

std::string artifact_to_json(const RunArtifact& artifact) {
    json j;
    j["schema"] = "cirrt-result-v1";
    j["scenario"] = artifact.scenario_name;
    j["mode"] = artifact.mode;
    j["seed"] = artifact.seed;
    j["budget"] = {{"kind", artifact.budget.kind == Budget::Kind::Iterations ? "iterations" : "wall"},
                   {"value", artifact.budget.value}};

    const PlanResult& result = artifact.result;
    j["solved"] = result.solved();
    if (result.solved()) {
        j["best_time"] = result.tree.t_end_best;
    } else {
        j["best_time"] = nullptr;
    }
    j["counters"] = {{"iterations", result.iterations},
                     {"inserted", result.inserted},
                     {"discarded_no_parent", result.discarded_no_parent},
                     {"discarded_collision", result.discarded_collision},
                     {"rejected_unconnectable", result.rejected_unconnectable},
                     {"elapsed_seconds", result.elapsed_seconds}};

    json checkpoints = json::array();
    for (const Checkpoint& cp : result.checkpoints) {
        checkpoints.push_back({{"at", cp.at},
                               {"t_end_best", cp.t_end_best},
                               {"tree_size", cp.tree_size},
                               {"solved", cp.solved}});
    }
    j["checkpoints"] = std::move(checkpoints);

    json tree = json::array();
    for (const PlanNode& node : result.tree.nodes) {
        json n{{"id", node.id},
               {"kind", kind_name(node.kind)},
               {"time", node.time},
               {"cost", node.cost},
               {"state", to_json(node.state)}};
        if (node.parent) {
            n["parent"] = *node.parent;
        } else {
            n["parent"] = nullptr;
        }
        if (node.kind == NodeKind::Collision) {
            n["post_state"] = to_json(node.post_state);
            n["surface_normal"] = to_json(node.surface_normal);
            n["obstacle"] = node.obstacle_index;
        }
        tree.push_back(std::move(n));
    }
    j["tree"] = std::move(tree);

    if (artifact.trajectory) {
        json segments = json::array();
        for (const TrajectorySegment& segment : artifact.trajectory->segments) {
            const MotionPrimitive& p = segment.primitive;
            json s{{"t0", p.t0},
                   {"tf", p.tf},
                   {"a0", to_json(p.a0)},
                   {"a1", to_json(p.a1)},
                   {"a2", to_json(p.a2)},
                   {"initial_state", to_json(p.initial_state)},
                   {"from_node", segment.from_node},
                   {"to_node", segment.to_node}};
            if (segment.impact_at_start) {
                const ImpactEvent& e = *segment.impact_at_start;
                s["impact"] = {{"time", e.time},
                               {"surface_normal", to_json(e.surface_normal)},
                               {"pre_state", to_json(e.pre_state)},
                               {"post_state", to_json(e.post_state)},
                               {"obstacle", e.obstacle_index}};
            } else {
                s["impact"] = nullptr;
            }
            segments.push_back(std::move(s));
        }
        j["trajectory"] = {{"duration", artifact.trajectory->duration}, {"segments", std::move(segments)}};
    } else {
        j["trajectory"] = nullptr;
    }

    return j.dump(2);
}

void write_artifact(const RunArtifact& artifact, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot write " + path.string());
    out << artifact_to_json(artifact) << '\n';
}

Trajectory trajectory_from_artifact(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path.string());
    json j;
    in >> j;

    if (!j.contains("trajectory") || j["trajectory"].is_null()) {
        throw std::runtime_error("result artifact contains no trajectory");
    }
    const json& tj = j["trajectory"];

    Trajectory trajectory;
    trajectory.duration = tj.at("duration").get<double>();
    for (const json& s : tj.at("segments")) {
        TrajectorySegment segment;
        segment.primitive.t0 = s.at("t0").get<double>();
        segment.primitive.tf = s.at("tf").get<double>();
        segment.primitive.a0 = vec3_from(s.at("a0"));
        segment.primitive.a1 = vec3_from(s.at("a1"));
        segment.primitive.a2 = vec3_from(s.at("a2"));
        segment.primitive.initial_state = state_from(s.at("initial_state"));
        segment.from_node = s.at("from_node").get<NodeId>();
        segment.to_node = s.at("to_node").get<NodeId>();
        if (s.contains("impact") && !s["impact"].is_null()) {
            const json& e = s["impact"];
            segment.impact_at_start = ImpactEvent{e.at("time").get<double>(), vec3_from(e.at("surface_normal")),
                                                  state_from(e.at("pre_state")), state_from(e.at("post_state")),
                                                  e.at("obstacle").get<int>()};
        }
        trajectory.segments.push_back(std::move(segment));
    }
    return trajectory;
}

std::string run_summary_text(const RunArtifact& artifact) {
    const PlanResult& result = artifact.result;
    std::ostringstream out;
    out << "scenario:                " << artifact.scenario_name << "\n";
    out << "mode:                    " << artifact.mode << "\n";
    out << "seed:                    " << artifact.seed << "\n";
    out << "budget:                  "
        << (artifact.budget.kind == Budget::Kind::Iterations ? "iterations " : "wall_seconds ")
        << g9(artifact.budget.value) << "\n";
    out << "solved:                  " << (result.solved() ? "yes" : "no") << "\n";
    if (result.solved()) out << "best_trajectory_time:    " << g9(result.tree.t_end_best) << "\n";
    out << "tree_size:               " << result.tree.size() << "\n";
    out << "iterations:              " << result.iterations << "\n";
    out << "inserted:                " << result.inserted << "\n";
    out << "discarded_no_parent:     " << result.discarded_no_parent << "\n";
    out << "discarded_collision:     " << result.discarded_collision << "\n";
    out << "rejected_unconnectable:  " << result.rejected_unconnectable << "\n";
    out << "elapsed_seconds:         " << g9(result.elapsed_seconds) << "\n";

    std::size_t collision_nodes = 0;
    for (const PlanNode& node : result.tree.nodes) {
        if (node.kind == NodeKind::Collision) ++collision_nodes;
    }
    out << "collision_nodes:         " << collision_nodes << "\n";
    return out.str();
}

}  // namespace cirrt
