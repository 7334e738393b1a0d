#include <doctest.h>

#include <random>

#include "cirrt/geometry.hpp"
#include "oracles.hpp"

using namespace cirrt;

TEST_CASE("contains: sphere center, box outside, box boundary") {
    CHECK(contains(Sphere{{0, 0, 0}, 1.0}, {0, 0, 0}));
    CHECK_FALSE(contains(AxisAlignedBox{{0, 0, 0}, {1, 1, 1}}, {2, 0, 0}));
    CHECK(contains(AxisAlignedBox{{0.9, -1, -1}, {1.1, 1, 1}}, {1.0, 0, 0}));
}

TEST_CASE("closest_point: axis sphere and box clamps") {
    CHECK(closest_point(Sphere{{0, 0, 0}, 1.0}, {2, 0, 0}) == Vec3{1, 0, 0});
    CHECK(closest_point(AxisAlignedBox{{0, 0, 0}, {1, 1, 1}}, {2, 2, 0.5}) == Vec3{1, 1, 0.5});
    CHECK(closest_point(AxisAlignedBox{{0, 0, 0}, {1, 1, 1}}, {0.5, -3, 0.5}) == Vec3{0.5, 0, 0.5});
}

TEST_CASE("closest_point: sphere center is degenerate") {
    CHECK_THROWS_AS(closest_point(Sphere{{1, 1, 1}, 2.0}, {1, 1, 1}), std::invalid_argument);
}

TEST_CASE("separation_plane: sphere, box face, box corner") {
    const Plane sphere_plane = separation_plane(Sphere{{0, 0, 0}, 1.0}, {3, 0, 0});
    CHECK(sphere_plane.normal.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sphere_plane.offset == doctest::Approx(1.0).epsilon(1e-12));

    const Plane face_plane = separation_plane(AxisAlignedBox{{0, 0, 0}, {1, 1, 1}}, {0.5, 0.5, 5});
    CHECK(face_plane.normal == Vec3{0, 0, 1});
    CHECK(face_plane.offset == doctest::Approx(1.0));

    const Plane corner_plane = separation_plane(AxisAlignedBox{{0, 0, 0}, {1, 1, 1}}, {2, 2, 2});
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    CHECK(corner_plane.normal.x == doctest::Approx(inv_sqrt3).epsilon(1e-12));
    CHECK(corner_plane.normal.y == doctest::Approx(inv_sqrt3).epsilon(1e-12));
    CHECK(corner_plane.normal.z == doctest::Approx(inv_sqrt3).epsilon(1e-12));
    CHECK(corner_plane.offset == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("separation_plane: near-surface point rejected") {
    CHECK_THROWS_AS(separation_plane(Sphere{{0, 0, 0}, 1.0}, {1.0 + 1e-10, 0, 0}), std::invalid_argument);
}

TEST_CASE("separation_plane and closest_point properties over random pairs") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> coord(-4.0, 4.0);
    int tested = 0;
    while (tested < 1000) {
        const ConvexObstacle obstacle = oracle::random_obstacle(rng, {-2, -2, -2}, {2, 2, 2});
        const Vec3 query{coord(rng), coord(rng), coord(rng)};
        if (oracle::surface_distance(obstacle, query) < 1e-6) continue;
        ++tested;

        const Vec3 support = closest_point(obstacle, query);
        CHECK(oracle::surface_distance(obstacle, support) <= 1e-9);

        const Plane plane = separation_plane(obstacle, query);
        CHECK(dot(plane.normal, query) > plane.offset);

        const double best = norm(query - support);
        for (int s = 0; s < 10; ++s) {
            const Vec3 q = oracle::surface_point(obstacle, rng);
            CHECK(dot(plane.normal, q) <= plane.offset + 1e-9);
            CHECK(norm(query - q) >= best - 1e-9);
        }
    }
}

TEST_CASE("inflate: identity, sphere, box") {
    const ConvexObstacle sphere = Sphere{{0, 0, 0}, 1.0};
    CHECK(std::get<Sphere>(inflate(sphere, 0.0)).radius == 1.0);
    CHECK(std::get<Sphere>(inflate(sphere, 0.2)).radius == doctest::Approx(1.2));

    const auto box = std::get<AxisAlignedBox>(inflate(AxisAlignedBox{{0, 0, 0}, {1, 1, 1}}, 0.1));
    CHECK(box.min_corner == Vec3{-0.1, -0.1, -0.1});
    CHECK(box.max_corner == Vec3{1.1, 1.1, 1.1});

    CHECK_THROWS_AS(inflate(sphere, -0.5), std::invalid_argument);
}

TEST_CASE("inflate is monotone on random interior points") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const ConvexObstacle obstacle = oracle::random_obstacle(rng, {-1, -1, -1}, {1, 1, 1});
        const ConvexObstacle grown = inflate(obstacle, 0.5 * unit(rng));
        const Vec3 center = std::holds_alternative<Sphere>(obstacle)
                                ? std::get<Sphere>(obstacle).center
                                : (std::get<AxisAlignedBox>(obstacle).min_corner +
                                   std::get<AxisAlignedBox>(obstacle).max_corner) * 0.5;
        const Vec3 inside = center + (oracle::surface_point(obstacle, rng) - center) * 0.9;
        CHECK(contains(obstacle, inside));
        CHECK(contains(grown, inside));
    }
}

TEST_CASE("validate rejects degenerate shapes") {
    CHECK_THROWS_AS(validate(ConvexObstacle{Sphere{{0, 0, 0}, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ConvexObstacle{AxisAlignedBox{{1, 0, 0}, {0, 1, 1}}}), std::invalid_argument);
}
