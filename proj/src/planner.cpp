#include "cirrt/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cirrt {

namespace {

constexpr double kMinEdgeDuration = 1e-6;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

MotionPrimitive primitive_for_edge(const ExploringTree& tree, NodeId parent_id, NodeId child_id) {
    const PlanNode& parent = tree.node(parent_id);
    const PlanNode& child = tree.node(child_id);
    return generate_primitive(parent.departure_state(), parent.time, child.state, child.time);
}

CheckWindow edge_window(NodeKind from_kind, NodeKind to_kind, const CollisionParams& params) {
    CheckWindow window;
    if (from_kind == NodeKind::Collision) window.skip_initial = params.time_threshold;
    if (to_kind == NodeKind::Collision) window.skip_final = params.time_threshold;
    return window;
}

}  // namespace

bool bounds_contain(const Bounds3& b, const Vec3& v) {
    return v.x >= b.lo.x && v.x <= b.hi.x && v.y >= b.lo.y && v.y <= b.hi.y && v.z >= b.lo.z && v.z <= b.hi.z;
}

Planner::Planner(const VehicleState& start, const VehicleState& goal, std::vector<ConvexObstacle> obstacles,
                 PlannerConfig config)
    : start_(start), goal_(goal), config_(std::move(config)) {
    if (!is_finite(start) || !is_finite(goal)) throw std::invalid_argument("planner: non-finite start or goal");
    if (!(config_.t_end_init > 0.0)) throw std::invalid_argument("planner: t_end_init must be positive");
    if (config_.goal_sampling_rate < 0.0 || config_.goal_sampling_rate > 1.0) {
        throw std::invalid_argument("planner: goal_sampling_rate must be in [0, 1]");
    }
    if (config_.r_veh < 0.0) throw std::invalid_argument("planner: r_veh must be >= 0");

    obstacles_.reserve(obstacles.size());
    for (const ConvexObstacle& obstacle : obstacles) {
        validate(obstacle);
        obstacles_.push_back(inflate(obstacle, config_.r_veh));
    }

    for (const ConvexObstacle& obstacle : obstacles_) {
        if (contains(obstacle, start_.position)) {
            throw std::invalid_argument("planner: start state inside an inflated obstacle");
        }
    }
    if (!bounds_contain(config_.position_bounds, goal_.position) ||
        !bounds_contain(config_.velocity_bounds, goal_.velocity) ||
        !bounds_contain(config_.acceleration_bounds, goal_.acceleration)) {
        throw std::invalid_argument("planner: goal state outside the state bounds");
    }

    // scramble the seed so consecutive seeds start far apart in stream space
    // (raw splitmix states of neighboring seeds are one-step-shifted copies)
    std::uint64_t scramble = config_.rng_seed ^ 0x2545f4914f6cdd1dULL;
    rng_state_ = splitmix64(scramble);

    PlanNode root;
    root.id = 0;
    root.state = start_;
    root.time = 0.0;
    root.kind = NodeKind::Normal;
    root.cost = 0.0;
    tree_.nodes.push_back(std::move(root));
    tree_.t_end_best = config_.t_end_init;
}

double Planner::uniform01() { return static_cast<double>(splitmix64(rng_state_) >> 11) * 0x1.0p-53; }

double Planner::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

Candidate Planner::sample() {
    Candidate c;
    if (uniform01() < config_.goal_sampling_rate) {
        c.kind = NodeKind::Goal;
        c.state = goal_;
    } else {
        c.kind = NodeKind::Normal;
        const Bounds3& pb = config_.position_bounds;
        const Bounds3& vb = config_.velocity_bounds;
        const Bounds3& ab = config_.acceleration_bounds;
        if (config_.fixed_z) {
            c.state.position = {uniform(pb.lo.x, pb.hi.x), uniform(pb.lo.y, pb.hi.y), *config_.fixed_z};
            c.state.velocity = {uniform(vb.lo.x, vb.hi.x), uniform(vb.lo.y, vb.hi.y), 0.0};
            c.state.acceleration = {uniform(ab.lo.x, ab.hi.x), uniform(ab.lo.y, ab.hi.y), 0.0};
        } else {
            c.state.position = {uniform(pb.lo.x, pb.hi.x), uniform(pb.lo.y, pb.hi.y), uniform(pb.lo.z, pb.hi.z)};
            c.state.velocity = {uniform(vb.lo.x, vb.hi.x), uniform(vb.lo.y, vb.hi.y), uniform(vb.lo.z, vb.hi.z)};
            c.state.acceleration = {uniform(ab.lo.x, ab.hi.x), uniform(ab.lo.y, ab.hi.y), uniform(ab.lo.z, ab.hi.z)};
        }
    }
    c.time = tree_.t_end_best * (1.0 - uniform01());
    return c;
}

MotionPrimitive Planner::connect(const PlanNode& from, const Candidate& to) const {
    if (!(from.time < to.time)) throw std::invalid_argument("connect: parent time must precede candidate time");
    return generate_primitive(from.departure_state(), from.time, to.state, to.time);
}

std::optional<NodeId> Planner::closest_by_primitive_cost(const Candidate& candidate) const {
    std::optional<NodeId> best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const PlanNode& node : tree_.nodes) {
        if (!(candidate.time - node.time >= kMinEdgeDuration)) continue;
        const double c = cost(generate_primitive(node.departure_state(), node.time, candidate.state, candidate.time));
        if (c < best_cost) {
            best_cost = c;
            best = node.id;
        }
    }
    return best;
}

std::optional<Candidate> Planner::get_collision_node(const Candidate& sampled) {
    if (sampled.kind == NodeKind::Goal) {
        throw std::invalid_argument("get_collision_node: goal samples bypass collision-node generation");
    }
    const auto closest = closest_by_primitive_cost(sampled);
    if (!closest) return std::nullopt;

    const PlanNode& node = tree_.node(*closest);
    const MotionPrimitive primitive = connect(node, sampled);
    const CheckWindow window = edge_window(node.kind, sampled.kind, config_.collision);
    const CollisionReport report = collision_time(primitive, obstacles_, config_.collision, window);
    if (!report.hit) return sampled;

    const VehicleState pre = state_at(primitive, report.time);
    if (!(dot(pre.velocity, report.surface_normal) < -1e-12)) return std::nullopt;  // degenerate graze

    Candidate out;
    out.kind = NodeKind::Collision;
    out.state = pre;
    out.time = report.time;
    out.post_state = collision_model(pre, report.surface_normal, config_.collision);
    out.surface_normal = report.surface_normal;
    out.obstacle_index = report.obstacle_index;
    return out;
}

std::size_t Planner::screen_budget() const {
    const std::size_t n = tree_.size();
    if (n < 16) return std::numeric_limits<std::size_t>::max();
    return static_cast<std::size_t>(std::ceil(2.0 * std::numbers::e * std::log(static_cast<double>(n))));
}

bool Planner::edge_ok(const PlanNode& from, NodeKind to_kind, const MotionPrimitive& primitive) const {
    const CheckWindow window = edge_window(from.kind, to_kind, config_.collision);
    return collision_free(primitive, obstacles_, config_.collision, window);
}

std::optional<NodeId> Planner::connect_min_cost_path(const Candidate& candidate) {
    // cost-sorted scan: candidates beyond the k-th smallest feasible primitive
    // cost are discarded without the expensive checks
    struct Entry {
        double edge_cost;
        NodeId id;
    };
    std::vector<Entry> entries;
    entries.reserve(tree_.size());
    for (const PlanNode& node : tree_.nodes) {
        if (!(candidate.time - node.time >= kMinEdgeDuration)) continue;
        entries.push_back({cost(connect(node, candidate)), node.id});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.edge_cost != b.edge_cost ? a.edge_cost < b.edge_cost : a.id < b.id;
    });

    const std::size_t budget = screen_budget();
    std::size_t feasible_found = 0;
    std::optional<NodeId> best_parent;
    double best_total = std::numeric_limits<double>::infinity();

    for (const Entry& entry : entries) {
        if (feasible_found >= budget) break;
        const PlanNode& node = tree_.node(entry.id);
        const MotionPrimitive primitive = connect(node, candidate);
        if (!input_feasible(primitive, config_.feasibility)) continue;
        if (!edge_ok(node, candidate.kind, primitive)) continue;
        ++feasible_found;
        const double total = node.cost + entry.edge_cost;
        if (total < best_total) {
            best_total = total;
            best_parent = node.id;
        }
    }

    if (!best_parent) return std::nullopt;

    PlanNode node;
    node.id = static_cast<NodeId>(tree_.size());
    node.state = candidate.state;
    node.time = candidate.time;
    node.kind = candidate.kind;
    node.post_state = candidate.post_state;
    node.surface_normal = candidate.surface_normal;
    node.obstacle_index = candidate.obstacle_index;
    node.parent = *best_parent;
    node.cost = best_total;
    tree_.node(*best_parent).children.push_back(node.id);
    tree_.nodes.push_back(std::move(node));

    const NodeId id = static_cast<NodeId>(tree_.size() - 1);
    if (candidate.kind == NodeKind::Goal) refresh_best_goal(id);
    return id;
}

void Planner::refresh_best_goal(NodeId goal_id) {
    const PlanNode& node = tree_.node(goal_id);
    if (node.time < tree_.t_end_best) {
        tree_.t_end_best = node.time;
        tree_.best_goal = goal_id;
    }
}

void Planner::rewire(NodeId new_node) {
    const double source_time = tree_.node(new_node).time;
    const double source_cost = tree_.node(new_node).cost;
    const VehicleState source_state = tree_.node(new_node).departure_state();

    struct Entry {
        double edge_cost;
        NodeId id;
    };
    std::vector<Entry> entries;
    entries.reserve(tree_.size());
    for (const PlanNode& node : tree_.nodes) {
        if (node.id == new_node) continue;
        if (!(node.time - source_time >= kMinEdgeDuration)) continue;
        entries.push_back({cost(generate_primitive(source_state, source_time, node.state, node.time)), node.id});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.edge_cost != b.edge_cost ? a.edge_cost < b.edge_cost : a.id < b.id;
    });

    const std::size_t budget = screen_budget();
    std::size_t feasible_found = 0;

    for (const Entry& entry : entries) {
        if (feasible_found >= budget) break;
        PlanNode& node = tree_.node(entry.id);
        const MotionPrimitive primitive = generate_primitive(source_state, source_time, node.state, node.time);
        if (!input_feasible(primitive, config_.feasibility)) continue;
        if (!edge_ok(tree_.node(new_node), node.kind, primitive)) continue;
        ++feasible_found;

        const double total = source_cost + entry.edge_cost;
        if (total < node.cost) {
            const double delta = total - node.cost;
            if (node.parent) {
                auto& siblings = tree_.node(*node.parent).children;
                siblings.erase(std::find(siblings.begin(), siblings.end(), node.id));
            }
            node.parent = new_node;
            tree_.node(new_node).children.push_back(node.id);

            // shift the whole subtree by the improvement
            std::vector<NodeId> stack{node.id};
            while (!stack.empty()) {
                const NodeId cur = stack.back();
                stack.pop_back();
                tree_.node(cur).cost += delta;
                for (const NodeId child : tree_.node(cur).children) stack.push_back(child);
            }
        }
    }
}

PlanResult Planner::plan() {
    using Clock = std::chrono::steady_clock;
    const auto start_time = Clock::now();
    const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start_time).count(); };

    std::vector<double> marks = config_.checkpoints;
    std::sort(marks.begin(), marks.end());
    std::size_t next_mark = 0;

    PlanResult result;
    std::uint64_t iteration = 0;

    const auto budget_left = [&] {
        if (config_.budget.kind == Budget::Kind::Iterations) {
            return static_cast<double>(iteration) < config_.budget.value;
        }
        return elapsed() < config_.budget.value;
    };

    while (budget_left()) {
        ++iteration;
        const Candidate sampled = sample();
        std::optional<Candidate> candidate;

        if (sampled.kind == NodeKind::Goal) {
            candidate = sampled;
        } else if (config_.collision_inclusive) {
            candidate = get_collision_node(sampled);
            if (!candidate) ++discarded_no_parent_;
        } else {
            const auto closest = closest_by_primitive_cost(sampled);
            if (!closest) {
                ++discarded_no_parent_;
            } else {
                const PlanNode& node = tree_.node(*closest);
                const MotionPrimitive primitive = connect(node, sampled);
                if (edge_ok(node, sampled.kind, primitive)) {
                    candidate = sampled;
                } else {
                    ++discarded_collision_;
                }
            }
        }

        if (candidate) {
            if (const auto inserted = connect_min_cost_path(*candidate)) {
                ++inserted_;
                rewire(*inserted);
            } else {
                ++rejected_unconnectable_;
            }
        }

        if (observer_) observer_(*this, iteration);

        const double progress =
            config_.budget.kind == Budget::Kind::Iterations ? static_cast<double>(iteration) : elapsed();
        while (next_mark < marks.size() && marks[next_mark] <= progress) {
            result.checkpoints.push_back(
                Checkpoint{marks[next_mark], tree_.t_end_best, tree_.size(), tree_.best_goal.has_value()});
            ++next_mark;
        }
    }

    result.tree = tree_;
    result.iterations = iteration;
    result.inserted = inserted_;
    result.discarded_no_parent = discarded_no_parent_;
    result.discarded_collision = discarded_collision_;
    result.rejected_unconnectable = rejected_unconnectable_;
    result.elapsed_seconds = elapsed();
    return result;
}

MotionPrimitive Planner::edge_primitive(NodeId parent, NodeId child) const {
    return primitive_for_edge(tree_, parent, child);
}

Trajectory extract_best_trajectory(const ExploringTree& tree) {
    if (!tree.best_goal) throw std::runtime_error("no feasible trajectory found");

    std::vector<NodeId> chain;
    for (std::optional<NodeId> cur = tree.best_goal; cur; cur = tree.node(*cur).parent) {
        chain.push_back(*cur);
        if (chain.size() > tree.size()) throw std::runtime_error("tree parent links contain a cycle");
    }
    std::reverse(chain.begin(), chain.end());

    Trajectory trajectory;
    trajectory.duration = tree.node(*tree.best_goal).time;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        const PlanNode& from = tree.node(chain[i]);
        const PlanNode& to = tree.node(chain[i + 1]);
        TrajectorySegment segment;
        segment.primitive = primitive_for_edge(tree, from.id, to.id);
        segment.from_node = from.id;
        segment.to_node = to.id;
        if (from.kind == NodeKind::Collision) {
            segment.impact_at_start =
                ImpactEvent{from.time, from.surface_normal, from.state, from.post_state, from.obstacle_index};
        }
        trajectory.segments.push_back(std::move(segment));
    }
    return trajectory;
}

TreeAudit audit_tree(const ExploringTree& tree, std::span<const ConvexObstacle> inflated_obstacles,
                     const FeasibilityLimits& limits, const CollisionParams& params) {
    TreeAudit audit;
    const std::size_t n = tree.size();

    for (std::size_t i = 0; i < n; ++i) {
        const PlanNode& node = tree.nodes[i];
        if (node.id != static_cast<NodeId>(i)) {
            audit.acyclic = false;
            audit.detail += "node id mismatch at index " + std::to_string(i) + "; ";
            break;
        }

        for (const NodeId child : node.children) {
            if (tree.node(child).parent != node.id) {
                audit.acyclic = false;
                audit.detail += "children list of node " + std::to_string(node.id) + " is stale; ";
            }
        }

        if (node.kind == NodeKind::Collision) {
            const bool impact_ok = dot(node.state.velocity, node.surface_normal) < 0.0 &&
                                   dot(node.post_state.velocity, node.surface_normal) > 0.0 &&
                                   node.post_state.position == node.state.position &&
                                   node.post_state.acceleration == Vec3{0.0, 0.0, 0.0};
            if (!impact_ok) {
                audit.costs_consistent = false;
                audit.detail += "collision node " + std::to_string(node.id) + " violates the impact contract; ";
            }
        }

        if (!node.parent) {
            if (node.id != 0) {
                audit.acyclic = false;
                audit.detail += "non-root node " + std::to_string(node.id) + " has no parent; ";
            }
            continue;
        }

        // every parent chain must reach the root in < n steps
        std::size_t steps = 0;
        std::optional<NodeId> cur = node.id;
        while (cur && steps <= n) {
            cur = tree.node(*cur).parent;
            ++steps;
        }
        if (steps > n) {
            audit.acyclic = false;
            audit.detail += "cycle through node " + std::to_string(node.id) + "; ";
            continue;
        }

        const PlanNode& parent = tree.node(*node.parent);
        if (!(parent.time < node.time)) {
            audit.time_monotone = false;
            audit.detail += "time not increasing into node " + std::to_string(node.id) + "; ";
        }

        const MotionPrimitive primitive = primitive_for_edge(tree, parent.id, node.id);
        const double expected = parent.cost + cost(primitive);
        if (std::abs(node.cost - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
            audit.costs_consistent = false;
            audit.detail += "cost mismatch at node " + std::to_string(node.id) + "; ";
        }

        const CheckWindow window = edge_window(parent.kind, node.kind, params);
        if (!input_feasible(primitive, limits) ||
            !collision_free(primitive, inflated_obstacles, params, window)) {
            audit.edges_feasible = false;
            audit.detail += "edge into node " + std::to_string(node.id) + " fails recheck; ";
        }
    }
    return audit;
}

}  // namespace cirrt
