#pragma once

#include "cirrt/vec3.hpp"

namespace cirrt {

/// Full planning state: position, velocity, acceleration.
struct VehicleState {
    Vec3 position;
    Vec3 velocity;
    Vec3 acceleration;

    constexpr bool operator==(const VehicleState&) const = default;
};

inline bool is_finite(const VehicleState& s) {
    return is_finite(s.position) && is_finite(s.velocity) && is_finite(s.acceleration);
}

/// Per-axis quintic trajectory piece on [t0, tf]. In local time u = t - t0,
///     x(u) = a0 u^5 + a1 u^4 + a2 u^3 + 0.5 x''(0) u^2 + x'(0) u + x(0)
/// so evaluating at u = 0 reproduces initial_state exactly.
struct MotionPrimitive {
    double t0{0.0};
    double tf{0.0};
    Vec3 a0;
    Vec3 a1;
    Vec3 a2;
    VehicleState initial_state;

    double duration() const { return tf - t0; }
};

/// Thrust and body-rate limits for a multicopter tracking a primitive.
struct FeasibilityLimits {
    double f_min{2.0};     // m/s^2, minimum total thrust (mass-normalized)
    double f_max{25.0};    // m/s^2, maximum total thrust
    double omega_max{20.0};  // rad/s, angular velocity magnitude bound
    Vec3 gravity{0.0, 0.0, -9.81};
};

/// The unique minimum-jerk quintic meeting both endpoint states. The tail
/// coefficients (a0, a1, a2) solve the per-axis 3x3 system imposed by the
/// terminal position/velocity/acceleration at T = tf - t0.
/// Throws if tf <= t0 or T < 1e-6 s.
MotionPrimitive generate_primitive(const VehicleState& s0, double t0, const VehicleState& sf, double tf);

/// Position (order 0), velocity, acceleration, or jerk (order 3) at absolute
/// time t in [t0, tf]. Throws for t outside the interval or order outside 0..3.
Vec3 evaluate(const MotionPrimitive& p, double t, int order);

VehicleState state_at(const MotionPrimitive& p, double t);

/// Integral of the squared jerk norm over [t0, tf], in closed form.
double cost(const MotionPrimitive& p);

/// True iff f_min <= ||acc(t) - gravity|| <= f_max everywhere and the rate
/// bound ||jerk(t)|| / ||acc(t) - gravity|| <= omega_max holds. Thrust extrema
/// come from the roots of the derivative of ||acc - g||^2 (a 64-cell
/// sign-change grid refined by bisection to 1e-10 s, plus the endpoints); the
/// rate bound is maximized over the same candidate set with local refinement.
/// A thrust below 1e-6 m/s^2 anywhere is rejected as infeasible: the rate
/// bound degenerates in free fall.
bool input_feasible(const MotionPrimitive& p, const FeasibilityLimits& limits);

}  // namespace cirrt
