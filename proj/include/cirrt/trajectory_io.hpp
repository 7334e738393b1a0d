#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cirrt/planner.hpp"

namespace cirrt {

struct SampleRow {
    double t{0.0};
    VehicleState state;
    int segment_id{0};
    bool impact{false};
};

/// Dense states on the uniform grid k / rate_hz plus one duplicated-timestamp
/// pair per impact (pre-impact row, then post-impact row). The final state is
/// always included. Throws for rate_hz <= 0 or an empty trajectory.
std::vector<SampleRow> sample_trajectory(const Trajectory& trajectory, double rate_hz);

/// Columns t,x,y,z,vx,vy,vz,ax,ay,az,segment_id,impact_flag at 9 significant
/// digits.
void write_samples_csv(const std::vector<SampleRow>& rows, std::ostream& out);
void write_samples_csv(const std::vector<SampleRow>& rows, const std::filesystem::path& path);

/// Everything a planning run produced: settings, counters, the full tree, and
/// the best trajectory when one exists. Serialized as JSON so `export` can
/// re-sample it later.
struct RunArtifact {
    std::string scenario_name;
    std::string mode;  // "inclusive" or "exclusive"
    std::uint64_t seed{0};
    Budget budget;
    PlanResult result;
    std::optional<Trajectory> trajectory;
};

std::string artifact_to_json(const RunArtifact& artifact);
void write_artifact(const RunArtifact& artifact, const std::filesystem::path& path);

/// Reads back the trajectory stored in a result artifact.
/// Throws std::runtime_error when the artifact holds no trajectory.
Trajectory trajectory_from_artifact(const std::filesystem::path& path);

/// Human-readable run summary (9 significant digits).
std::string run_summary_text(const RunArtifact& artifact);

}  // namespace cirrt
