#include "cirrt/collision.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "cirrt/polynomial.hpp"

namespace cirrt {

namespace {

constexpr double kBoundaryEps = 1e-9;
constexpr double kRootTol = 1e-12;

poly::Poly clearance_poly(const MotionPrimitive& p, const Plane& plane) {
    poly::Poly d;
    d.degree = 5;
    d.c[5] = dot(plane.normal, p.a0);
    d.c[4] = dot(plane.normal, p.a1);
    d.c[3] = dot(plane.normal, p.a2);
    d.c[2] = 0.5 * dot(plane.normal, p.initial_state.acceleration);
    d.c[1] = dot(plane.normal, p.initial_state.velocity);
    d.c[0] = dot(plane.normal, p.initial_state.position) - plane.offset;
    d.trim();
    return d;
}

// Outward normal at a near-surface or interior point: the separation-plane
// normal when the point is cleanly outside, otherwise the nearest-face
// direction.
Vec3 contact_normal(const ConvexObstacle& obstacle, const Vec3& point) {
    if (signed_distance(obstacle, point) >= kBoundaryEps) {
        return separation_plane(obstacle, point).normal;
    }
    if (const auto* box = std::get_if<AxisAlignedBox>(&obstacle)) {
        double best = point.x - box->min_corner.x;
        Vec3 n{-1.0, 0.0, 0.0};
        const auto consider = [&](double d, const Vec3& candidate) {
            if (d < best) {
                best = d;
                n = candidate;
            }
        };
        consider(box->max_corner.x - point.x, Vec3{1.0, 0.0, 0.0});
        consider(point.y - box->min_corner.y, Vec3{0.0, -1.0, 0.0});
        consider(box->max_corner.y - point.y, Vec3{0.0, 1.0, 0.0});
        consider(point.z - box->min_corner.z, Vec3{0.0, 0.0, -1.0});
        consider(box->max_corner.z - point.z, Vec3{0.0, 0.0, 1.0});
        return n;
    }
    const auto& sphere = std::get<Sphere>(obstacle);
    const Vec3 radial = point - sphere.center;
    const double r = norm(radial);
    return r > 1e-12 ? radial / r : Vec3{0.0, 0.0, 1.0};
}

// Earliest collision time against one obstacle within [ta, tb]. The caller
// tests x(ta) once at the top level; sections with an inside endpoint are
// caught by the plane minima. Returns nullopt when the section is certified
// free.
std::optional<double> earliest_hit(const MotionPrimitive& p, const ConvexObstacle& obstacle, double ta,
                                   double tb, double threshold) {
    const double t_split = 0.5 * (ta + tb);
    const Vec3 mid = evaluate(p, t_split, 0);

    if (signed_distance(obstacle, mid) < kBoundaryEps) {
        // split point inside or on the boundary: the earliest crossing lies in
        // the left half, and t_split itself is a contact even if the left half
        // comes back free
        if (t_split - ta < threshold) return ta;
        if (auto hit = earliest_hit(p, obstacle, ta, t_split, threshold)) return hit;
        return t_split;
    }

    const Plane plane = separation_plane(obstacle, mid);
    const double left_min = min_on_interval(p, plane, ta, t_split).value;
    const double right_min = min_on_interval(p, plane, t_split, tb).value;

    if (left_min > 0.0 && right_min > 0.0) return std::nullopt;

    if (left_min <= 0.0) {
        if (t_split - ta < threshold) return ta;
        if (auto hit = earliest_hit(p, obstacle, ta, t_split, threshold)) return hit;
    }
    if (right_min <= 0.0) {
        if (tb - t_split < threshold) return t_split;
        return earliest_hit(p, obstacle, t_split, tb, threshold);
    }
    return std::nullopt;
}

std::optional<double> first_hit_vs_obstacle(const MotionPrimitive& p, const ConvexObstacle& obstacle,
                                            double ta, double tb, double threshold) {
    if (signed_distance(obstacle, evaluate(p, ta, 0)) < kBoundaryEps) return ta;
    if (tb - ta < threshold) {
        // whole window already below the termination threshold: one plane test
        const Vec3 mid = evaluate(p, 0.5 * (ta + tb), 0);
        if (signed_distance(obstacle, mid) < kBoundaryEps) return ta;
        if (min_on_interval(p, separation_plane(obstacle, mid), ta, tb).value <= 0.0) return ta;
        return std::nullopt;
    }
    return earliest_hit(p, obstacle, ta, tb, threshold);
}

}  // namespace

IntervalMin min_on_interval(const MotionPrimitive& p, const Plane& plane, double ta, double tb) {
    const double lo = ta - p.t0;
    const double hi = tb - p.t0;
    const poly::Poly d = clearance_poly(p, plane);
    const poly::RootList critical = poly::roots_in_interval(d.derivative(), lo, hi, kRootTol);

    IntervalMin best{d(lo), ta};
    const double at_hi = d(hi);
    if (at_hi < best.value) best = {at_hi, tb};
    for (const double u : critical) {
        const double v = d(u);
        if (v < best.value) best = {v, p.t0 + u};
    }
    return best;
}

bool collision_free(const MotionPrimitive& p, std::span<const ConvexObstacle> obstacles,
                    const CollisionParams& params, const CheckWindow& window) {
    const double ta = p.t0 + window.skip_initial;
    const double tb = p.tf - window.skip_final;
    if (!(tb - ta > kRootTol)) return true;
    for (const ConvexObstacle& obstacle : obstacles) {
        if (first_hit_vs_obstacle(p, obstacle, ta, tb, params.time_threshold)) return false;
    }
    return true;
}

CollisionReport collision_time(const MotionPrimitive& p, std::span<const ConvexObstacle> obstacles,
                               const CollisionParams& params, const CheckWindow& window) {
    const double ta = p.t0 + window.skip_initial;
    const double tb = p.tf - window.skip_final;
    CollisionReport report;
    if (!(tb - ta > kRootTol)) return report;

    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const auto hit = first_hit_vs_obstacle(p, obstacles[i], ta, tb, params.time_threshold);
        if (hit && (!report.hit || *hit < report.time)) {
            report.hit = true;
            report.time = *hit;
            report.obstacle_index = static_cast<int>(i);
        }
    }
    if (report.hit) {
        report.surface_normal =
            contact_normal(obstacles[static_cast<std::size_t>(report.obstacle_index)], evaluate(p, report.time, 0));
    }
    return report;
}

VehicleState collision_model(const VehicleState& s, const Vec3& surface_normal, const CollisionParams& params) {
    if (std::abs(norm(surface_normal) - 1.0) > 1e-6) {
        throw std::invalid_argument("collision_model: surface_normal must be a unit vector");
    }
    const double v_n = dot(s.velocity, surface_normal);
    if (!(v_n < 0.0)) {
        throw std::invalid_argument("collision_model: velocity must point into the surface");
    }

    const Vec3 tangential = s.velocity - surface_normal * v_n;
    const double v_t = norm(tangential);

    const double v_n_post = -params.restitution_e * v_n;
    const double v_t_post =
        v_t + params.kappa * (-params.restitution_e - 1.0) * std::atan(v_t / v_n) * v_n;

    VehicleState post;
    post.position = s.position;
    post.velocity = surface_normal * v_n_post;
    if (v_t >= 1e-9) post.velocity += tangential * (v_t_post / v_t);
    post.acceleration = Vec3{0.0, 0.0, 0.0};
    return post;
}

}  // namespace cirrt
