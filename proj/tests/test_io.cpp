#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cirrt/collision.hpp"
#include "cirrt/trajectory_io.hpp"

using namespace cirrt;

namespace {

VehicleState rest_at(double x, double y = 0.0, double z = 0.0) { return {{x, y, z}, {0, 0, 0}, {0, 0, 0}}; }

Trajectory single_segment() {
    Trajectory trajectory;
    TrajectorySegment segment;
    segment.primitive = generate_primitive(rest_at(0), 0.0, rest_at(1), 1.0);
    segment.from_node = 0;
    segment.to_node = 1;
    trajectory.segments.push_back(segment);
    trajectory.duration = 1.0;
    return trajectory;
}

/// Head-on wall bounce stitched from the impact model's own prediction.
Trajectory bounce_trajectory() {
    const VehicleState pre{{1.0, 0, 0}, {2.0, 0, 0}, {0, 0, 0}};
    const VehicleState post = collision_model(pre, {-1, 0, 0});

    Trajectory trajectory;
    TrajectorySegment approach;
    approach.primitive = generate_primitive(rest_at(0), 0.0, pre, 0.75);
    approach.from_node = 0;
    approach.to_node = 1;
    trajectory.segments.push_back(approach);

    TrajectorySegment rebound;
    rebound.primitive = generate_primitive(post, 0.75, rest_at(0.2, 0.3), 2.0);
    rebound.from_node = 1;
    rebound.to_node = 2;
    rebound.impact_at_start = ImpactEvent{0.75, {-1, 0, 0}, pre, post, 0};
    trajectory.segments.push_back(rebound);
    trajectory.duration = 2.0;
    return trajectory;
}

}  // namespace

TEST_CASE("sample_trajectory: fencepost count on a one-second segment") {
    const auto rows = sample_trajectory(single_segment(), 100.0);
    CHECK(rows.size() == 101);
    CHECK(rows.front().t == 0.0);
    CHECK(rows.back().t == 1.0);
    CHECK(rows.back().state.position.x == doctest::Approx(1.0).epsilon(1e-12));
    for (const SampleRow& row : rows) CHECK_FALSE(row.impact);
}

TEST_CASE("sample_trajectory: invalid rate and empty trajectory") {
    CHECK_THROWS_AS(sample_trajectory(single_segment(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_trajectory(Trajectory{}, 100.0), std::invalid_argument);
}

TEST_CASE("sample_trajectory: one impact gives exactly one duplicated timestamp pair") {
    const Trajectory trajectory = bounce_trajectory();
    const auto rows = sample_trajectory(trajectory, 100.0);

    int impact_rows = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].impact) continue;
        ++impact_rows;
    }
    REQUIRE(impact_rows == 2);

    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        if (rows[i].impact && rows[i + 1].impact) {
            CHECK(rows[i].t == rows[i + 1].t);
            CHECK(rows[i].t == 0.75);
            CHECK(rows[i].segment_id == 0);
            CHECK(rows[i + 1].segment_id == 1);
            // velocity jump matches the impact model's prediction
            const ImpactEvent& event = *trajectory.segments[1].impact_at_start;
            CHECK(norm(rows[i].state.velocity - event.pre_state.velocity) < 1e-9);
            CHECK(norm(rows[i + 1].state.velocity - event.post_state.velocity) < 1e-9);
        }
        CHECK(rows[i].t <= rows[i + 1].t);
    }
}

TEST_CASE("sampled rows agree with evaluate at every timestamp") {
    const Trajectory trajectory = bounce_trajectory();
    for (const SampleRow& row : sample_trajectory(trajectory, 250.0)) {
        const MotionPrimitive& p = trajectory.segments[static_cast<std::size_t>(row.segment_id)].primitive;
        CHECK(norm(row.state.position - evaluate(p, row.t, 0)) <= 1e-9);
        CHECK(norm(row.state.velocity - evaluate(p, row.t, 1)) <= 1e-9);
        CHECK(norm(row.state.acceleration - evaluate(p, row.t, 2)) <= 1e-9);
    }
}

TEST_CASE("csv text round-trips within its 9-significant-digit precision") {
    const Trajectory trajectory = bounce_trajectory();
    std::ostringstream out;
    write_samples_csv(sample_trajectory(trajectory, 250.0), out);

    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x,y,z,vx,vy,vz,ax,ay,az,segment_id,impact_flag");

    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double t, x, y, z, vx, vy, vz, ax, ay, az;
        int segment_id, impact;
        fields >> t >> x >> y >> z >> vx >> vy >> vz >> ax >> ay >> az >> segment_id >> impact;
        const MotionPrimitive& p = trajectory.segments[static_cast<std::size_t>(segment_id)].primitive;
        const Vec3 pos = evaluate(p, t, 0);
        const Vec3 vel = evaluate(p, t, 1);
        const Vec3 acc = evaluate(p, t, 2);
        // 9 significant digits in the file
        CHECK(x == doctest::Approx(pos.x).epsilon(1e-8));
        CHECK(y == doctest::Approx(pos.y).epsilon(1e-8));
        CHECK(z == doctest::Approx(pos.z).epsilon(1e-8));
        CHECK(vx == doctest::Approx(vel.x).epsilon(1e-8));
        CHECK(vy == doctest::Approx(vel.y).epsilon(1e-8));
        CHECK(az == doctest::Approx(acc.z).epsilon(1e-8));
    }
    CHECK(rows == sample_trajectory(trajectory, 250.0).size());
}

TEST_CASE("artifact json round trip preserves the trajectory exactly") {
    RunArtifact artifact;
    artifact.scenario_name = "bounce";
    artifact.mode = "inclusive";
    artifact.seed = 11;
    artifact.budget = Budget::iterations(100);
    artifact.trajectory = bounce_trajectory();
    artifact.result.tree.t_end_best = 2.0;

    const auto path = std::filesystem::temp_directory_path() / "cirrt_artifact_test.json";
    write_artifact(artifact, path);
    const Trajectory back = trajectory_from_artifact(path);

    REQUIRE(back.segments.size() == artifact.trajectory->segments.size());
    CHECK(back.duration == artifact.trajectory->duration);
    for (std::size_t i = 0; i < back.segments.size(); ++i) {
        const MotionPrimitive& a = back.segments[i].primitive;
        const MotionPrimitive& b = artifact.trajectory->segments[i].primitive;
        CHECK(a.t0 == b.t0);
        CHECK(a.tf == b.tf);
        CHECK(a.a0 == b.a0);
        CHECK(a.a1 == b.a1);
        CHECK(a.a2 == b.a2);
        CHECK(a.initial_state == b.initial_state);
        CHECK(back.segments[i].impact_at_start.has_value() ==
              artifact.trajectory->segments[i].impact_at_start.has_value());
    }
    std::filesystem::remove(path);
}

TEST_CASE("artifact without a trajectory refuses to export") {
    RunArtifact artifact;
    artifact.scenario_name = "unsolved";
    artifact.mode = "exclusive";
    artifact.budget = Budget::iterations(5);

    const auto path = std::filesystem::temp_directory_path() / "cirrt_unsolved_test.json";
    write_artifact(artifact, path);
    CHECK_THROWS_AS(trajectory_from_artifact(path), std::runtime_error);
    std::filesystem::remove(path);
}
