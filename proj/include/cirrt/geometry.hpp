#pragma once

#include <variant>

#include "cirrt/vec3.hpp"

namespace cirrt {

struct AxisAlignedBox {
    Vec3 min_corner;
    Vec3 max_corner;
};

struct Sphere {
    Vec3 center;
    double radius{0.0};
};

using ConvexObstacle = std::variant<AxisAlignedBox, Sphere>;

/// { p : dot(normal, p) == offset }, with the unit normal pointing away from
/// the obstacle toward the query point.
struct Plane {
    Vec3 normal;
    double offset{0.0};
};

/// Throws std::invalid_argument on a degenerate shape (non-positive radius,
/// inverted box corners, non-finite fields).
void validate(const ConvexObstacle& obstacle);

/// True iff the point lies in the closed obstacle set.
bool contains(const ConvexObstacle& obstacle, const Vec3& point);

/// Distance to the obstacle surface, positive outside and negative inside.
double signed_distance(const ConvexObstacle& obstacle, const Vec3& point);

/// Closest obstacle point to an outside query point. For a box this is the
/// component-wise clamp; for a sphere the radial projection.
/// Throws when the direction is undefined (point at a sphere center).
Vec3 closest_point(const ConvexObstacle& obstacle, const Vec3& point);

/// Tangent plane through closest_point(obstacle, point), normal pointing at
/// the query point. The obstacle lies entirely in { q : dot(normal, q) <= offset }.
/// Requires the point to be at least 1e-9 m outside the obstacle.
Plane separation_plane(const ConvexObstacle& obstacle, const Vec3& point);

/// Grows the obstacle outward by `margin` (>= 0): sphere radius + margin, box
/// faces pushed out by margin. The inflated box is a superset of the exact
/// Minkowski sum with a ball of that radius.
ConvexObstacle inflate(const ConvexObstacle& obstacle, double margin);

}  // namespace cirrt
