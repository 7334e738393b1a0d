#pragma once

#include <span>

#include "cirrt/geometry.hpp"
#include "cirrt/motion_primitive.hpp"

namespace cirrt {

/// Impact model constants and the detector's bisection termination threshold.
struct CollisionParams {
    double restitution_e{0.43};
    double kappa{0.20};
    double time_threshold{1e-3};  // s
};

struct CollisionReport {
    bool hit{false};
    double time{0.0};          // first collision, valid iff hit
    int obstacle_index{-1};    // valid iff hit
    Vec3 surface_normal;       // outward unit normal at the impact region, valid iff hit
};

/// Portions of the primitive excluded from the collision check. Primitives
/// departing a post-collision state start on an obstacle surface, so callers
/// skip an initial interval; primitives arriving at a pre-collision state end
/// on one, so callers skip a final interval.
struct CheckWindow {
    double skip_initial{0.0};
    double skip_final{0.0};
};

struct IntervalMin {
    double value{0.0};  // minimum signed plane clearance, m
    double t{0.0};      // absolute time of the minimum
};

/// Exact minimum of d(t) = dot(plane.normal, x(t)) - plane.offset over
/// [ta, tb] within [t0, tf]. d is a quintic; its critical points are isolated
/// through the derivative chain and bisected to 1e-12 s.
IntervalMin min_on_interval(const MotionPrimitive& p, const Plane& plane, double ta, double tb);

/// Separation-plane recursion per obstacle: a section is free when it stays
/// strictly on the outside of a tangent plane built at its mid-time position;
/// otherwise it is bisected. A crossing section shorter than
/// params.time_threshold counts as a collision.
bool collision_free(const MotionPrimitive& p, std::span<const ConvexObstacle> obstacles,
                    const CollisionParams& params = {}, const CheckWindow& window = {});

/// Same recursion, always descending into the earliest offending section; the
/// reported time is the beginning of the terminal sub-threshold section. Over
/// several obstacles the earliest impact wins.
CollisionReport collision_time(const MotionPrimitive& p, std::span<const ConvexObstacle> obstacles,
                               const CollisionParams& params = {}, const CheckWindow& window = {});

/// Post-impact state: position kept, normal velocity reversed and scaled by
/// the restitution coefficient, tangential speed reduced in proportion to the
/// incidence angle, acceleration zeroed (hover assumption).
/// Requires the pre-impact velocity to point into the surface
/// (dot(velocity, surface_normal) < 0).
VehicleState collision_model(const VehicleState& s, const Vec3& surface_normal,
                             const CollisionParams& params = {});

}  // namespace cirrt
