#include "cirrt/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace cirrt {

namespace {

constexpr double kMinSeparation = 1e-9;

void require_finite(const Vec3& v, const char* what) {
    if (!is_finite(v)) throw std::invalid_argument(std::string(what) + ": non-finite component");
}

}  // namespace

void validate(const ConvexObstacle& obstacle) {
    if (const auto* box = std::get_if<AxisAlignedBox>(&obstacle)) {
        require_finite(box->min_corner, "box.min_corner");
        require_finite(box->max_corner, "box.max_corner");
        if (!(box->min_corner.x < box->max_corner.x && box->min_corner.y < box->max_corner.y &&
              box->min_corner.z < box->max_corner.z)) {
            throw std::invalid_argument("box: min_corner must be strictly below max_corner on every axis");
        }
    } else {
        const auto& sphere = std::get<Sphere>(obstacle);
        require_finite(sphere.center, "sphere.center");
        if (!(sphere.radius > 0.0) || !std::isfinite(sphere.radius)) {
            throw std::invalid_argument("sphere: radius must be positive and finite");
        }
    }
}

bool contains(const ConvexObstacle& obstacle, const Vec3& point) {
    require_finite(point, "contains: point");
    if (const auto* box = std::get_if<AxisAlignedBox>(&obstacle)) {
        return point.x >= box->min_corner.x && point.x <= box->max_corner.x &&
               point.y >= box->min_corner.y && point.y <= box->max_corner.y &&
               point.z >= box->min_corner.z && point.z <= box->max_corner.z;
    }
    const auto& sphere = std::get<Sphere>(obstacle);
    return norm_sq(point - sphere.center) <= sphere.radius * sphere.radius;
}

double signed_distance(const ConvexObstacle& obstacle, const Vec3& point) {
    if (const auto* box = std::get_if<AxisAlignedBox>(&obstacle)) {
        const Vec3 lo = box->min_corner - point;
        const Vec3 hi = point - box->max_corner;
        const Vec3 excess = cwise_max(cwise_max(lo, hi), Vec3{0.0, 0.0, 0.0});
        const double outside = norm(excess);
        if (outside > 0.0) return outside;
        const double dx = std::min(point.x - box->min_corner.x, box->max_corner.x - point.x);
        const double dy = std::min(point.y - box->min_corner.y, box->max_corner.y - point.y);
        const double dz = std::min(point.z - box->min_corner.z, box->max_corner.z - point.z);
        return -std::min({dx, dy, dz});
    }
    const auto& sphere = std::get<Sphere>(obstacle);
    return norm(point - sphere.center) - sphere.radius;
}

Vec3 closest_point(const ConvexObstacle& obstacle, const Vec3& point) {
    require_finite(point, "closest_point: point");
    if (const auto* box = std::get_if<AxisAlignedBox>(&obstacle)) {
        return cwise_min(cwise_max(point, box->min_corner), box->max_corner);
    }
    const auto& sphere = std::get<Sphere>(obstacle);
    const Vec3 radial = point - sphere.center;
    const double r = norm(radial);
    if (r < 1e-12) throw std::invalid_argument("closest_point: point at sphere center, direction undefined");
    return sphere.center + radial * (sphere.radius / r);
}

Plane separation_plane(const ConvexObstacle& obstacle, const Vec3& point) {
    if (signed_distance(obstacle, point) < kMinSeparation) {
        throw std::invalid_argument("separation_plane: point too close to the obstacle, normal undefined");
    }
    const Vec3 support = closest_point(obstacle, point);
    const Vec3 normal = normalized(point - support);
    return Plane{normal, dot(normal, support)};
}

ConvexObstacle inflate(const ConvexObstacle& obstacle, double margin) {
    if (!(margin >= 0.0) || !std::isfinite(margin)) {
        throw std::invalid_argument("inflate: margin must be finite and >= 0");
    }
    if (const auto* box = std::get_if<AxisAlignedBox>(&obstacle)) {
        const Vec3 pad{margin, margin, margin};
        return AxisAlignedBox{box->min_corner - pad, box->max_corner + pad};
    }
    const auto& sphere = std::get<Sphere>(obstacle);
    return Sphere{sphere.center, sphere.radius + margin};
}

}  // namespace cirrt
