#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cirrt/collision.hpp"
#include "cirrt/geometry.hpp"
#include "cirrt/motion_primitive.hpp"

namespace cirrt {

using NodeId = std::int32_t;

enum class NodeKind { Normal, Goal, Collision };

/// Axis-aligned interval box for sampling bounds; degenerate axes (lo == hi)
/// are allowed, unlike obstacle boxes.
struct Bounds3 {
    Vec3 lo;
    Vec3 hi;
};

bool bounds_contain(const Bounds3& b, const Vec3& v);

/// A (state, time) pair in the exploring tree. Collision nodes store the
/// pre-impact state in `state` and the predicted rebound in `post_state`;
/// outgoing edges depart from the rebound.
struct PlanNode {
    NodeId id{0};
    VehicleState state;
    double time{0.0};
    NodeKind kind{NodeKind::Normal};
    VehicleState post_state;    // valid iff kind == Collision
    Vec3 surface_normal;        // valid iff kind == Collision
    int obstacle_index{-1};     // valid iff kind == Collision
    std::optional<NodeId> parent;
    double cost{0.0};           // accumulated jerk cost from the root
    std::vector<NodeId> children;

    const VehicleState& departure_state() const { return kind == NodeKind::Collision ? post_state : state; }
};

/// Candidate node produced by sampling / collision-node generation, not yet in
/// the tree.
struct Candidate {
    VehicleState state;
    double time{0.0};
    NodeKind kind{NodeKind::Normal};
    VehicleState post_state;
    Vec3 surface_normal;
    int obstacle_index{-1};
};

struct ExploringTree {
    std::vector<PlanNode> nodes;
    double t_end_best{0.0};
    std::optional<NodeId> best_goal;

    std::size_t size() const { return nodes.size(); }
    const PlanNode& node(NodeId id) const { return nodes[static_cast<std::size_t>(id)]; }
    PlanNode& node(NodeId id) { return nodes[static_cast<std::size_t>(id)]; }
};

struct Budget {
    enum class Kind { Iterations, WallClock };
    Kind kind{Kind::Iterations};
    double value{0.0};  // iteration count or seconds

    static Budget iterations(std::uint64_t n) { return {Kind::Iterations, static_cast<double>(n)}; }
    static Budget wall_seconds(double s) { return {Kind::WallClock, s}; }
};

struct PlannerConfig {
    double goal_sampling_rate{0.05};
    Bounds3 position_bounds;
    Bounds3 velocity_bounds{{-3.0, -3.0, -3.0}, {3.0, 3.0, 3.0}};
    Bounds3 acceleration_bounds{{-2.0, -2.0, -2.0}, {2.0, 2.0, 2.0}};
    double t_end_init{0.0};
    std::uint64_t rng_seed{0};
    Budget budget;
    bool collision_inclusive{true};
    FeasibilityLimits feasibility;
    CollisionParams collision;
    double r_veh{0.0};
    std::optional<double> fixed_z;     // planar problems: z pinned, vz = az = 0
    std::vector<double> checkpoints;   // progress marks in budget units
};

struct Checkpoint {
    double at{0.0};  // iterations or seconds, matching the budget kind
    double t_end_best{0.0};
    std::size_t tree_size{0};
    bool solved{false};
};

struct PlanResult {
    ExploringTree tree;
    std::uint64_t iterations{0};
    std::uint64_t inserted{0};
    std::uint64_t discarded_no_parent{0};   // no earlier tree node, or the impact was degenerate
    std::uint64_t discarded_collision{0};   // collision-exclusive mode: closest-node primitive collided
    std::uint64_t rejected_unconnectable{0};  // no feasible parent found
    double elapsed_seconds{0.0};
    std::vector<Checkpoint> checkpoints;

    bool solved() const { return tree.best_goal.has_value(); }
    double best_time() const { return tree.t_end_best; }
};

struct ImpactEvent {
    double time{0.0};
    Vec3 surface_normal;
    VehicleState pre_state;
    VehicleState post_state;
    int obstacle_index{-1};
};

struct TrajectorySegment {
    MotionPrimitive primitive;
    std::optional<ImpactEvent> impact_at_start;
    NodeId from_node{0};
    NodeId to_node{0};
};

struct Trajectory {
    std::vector<TrajectorySegment> segments;
    double duration{0.0};
};

/// Collision-inclusive kinodynamic RRT* over state-time nodes. The loop is
/// plan(): sample, (optionally) convert colliding connections into collision
/// nodes, connect along the minimum-cost path, rewire. Deterministic for a
/// fixed seed and an iteration budget.
class Planner {
  public:
    Planner(const VehicleState& start, const VehicleState& goal, std::vector<ConvexObstacle> obstacles,
            PlannerConfig config);

    /// Goal state with probability goal_sampling_rate, otherwise uniform over
    /// the state bounds; the time is uniform over (0, t_end_best].
    Candidate sample();

    /// Primitive linking an existing node to a later candidate; collision
    /// nodes hand their rebound state to outgoing edges.
    /// Throws when the time ordering is violated.
    MotionPrimitive connect(const PlanNode& from, const Candidate& to) const;

    /// Connects the sample to its closest tree node (minimum primitive cost
    /// among earlier nodes). A collision on that connection turns the sample
    /// into a collision candidate at the impact time with the predicted
    /// rebound attached. Returns nullopt when no earlier node exists or the
    /// impact is degenerate.
    std::optional<Candidate> get_collision_node(const Candidate& sampled);

    /// Inserts the candidate under the feasible parent minimizing total cost.
    /// Once the tree holds at least 16 nodes, each scan only runs the
    /// feasibility and collision checks on connections up to the k-th smallest
    /// feasible primitive cost, k = ceil(2e ln |T|); costlier candidates are
    /// discarded unchecked. Returns the new node id on success.
    std::optional<NodeId> connect_min_cost_path(const Candidate& candidate);

    /// Reparents later nodes through the new node when that lowers their cost,
    /// propagating the cost change through their descendants. Applies the same
    /// k-th smallest cost screen as connect_min_cost_path.
    void rewire(NodeId new_node);

    /// Runs the full loop until the budget is exhausted.
    PlanResult plan();

    using IterationObserver = std::function<void(const Planner&, std::uint64_t iteration)>;
    void set_iteration_observer(IterationObserver observer) { observer_ = std::move(observer); }

    const ExploringTree& tree() const { return tree_; }
    ExploringTree& tree() { return tree_; }  // direct tree surgery, used by tests and tools
    std::span<const ConvexObstacle> inflated_obstacles() const { return obstacles_; }
    const PlannerConfig& config() const { return config_; }

    /// Rebuilds the primitive the edge parent -> child represents.
    MotionPrimitive edge_primitive(NodeId parent, NodeId child) const;

  private:
    double uniform01();
    double uniform(double lo, double hi);
    std::optional<NodeId> closest_by_primitive_cost(const Candidate& candidate) const;
    bool edge_ok(const PlanNode& from, NodeKind to_kind, const MotionPrimitive& primitive) const;
    std::size_t screen_budget() const;  // feasible connections examined per scan
    void refresh_best_goal(NodeId goal_id);

    VehicleState start_;
    VehicleState goal_;
    std::vector<ConvexObstacle> obstacles_;  // already inflated by r_veh
    PlannerConfig config_;
    ExploringTree tree_;
    std::uint64_t rng_state_;
    IterationObserver observer_;

    std::uint64_t discarded_no_parent_{0};
    std::uint64_t discarded_collision_{0};
    std::uint64_t rejected_unconnectable_{0};
    std::uint64_t inserted_{0};
};

/// Backtracks from the best goal node and emits the edge primitives in
/// forward order, annotating edges that depart from collision nodes with the
/// impact event. Throws when no goal was reached.
Trajectory extract_best_trajectory(const ExploringTree& tree);

/// Structural audit used by tests and debug scans.
struct TreeAudit {
    bool acyclic{true};
    bool costs_consistent{true};
    bool time_monotone{true};
    bool edges_feasible{true};
    bool ok() const { return acyclic && costs_consistent && time_monotone && edges_feasible; }
    std::string detail;
};

TreeAudit audit_tree(const ExploringTree& tree, std::span<const ConvexObstacle> inflated_obstacles,
                     const FeasibilityLimits& limits, const CollisionParams& params);

}  // namespace cirrt
