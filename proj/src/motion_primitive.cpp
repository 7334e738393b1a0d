#include "cirrt/motion_primitive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cirrt/polynomial.hpp"

namespace cirrt {

namespace {

constexpr double kMinDuration = 1e-6;
constexpr double kTimeSlack = 1e-9;
constexpr double kFreeFallThrust = 1e-6;
constexpr int kExtremaGrid = 64;
constexpr double kExtremaTol = 1e-10;

double clamp_local_time(const MotionPrimitive& p, double t) {
    const double lo = p.t0, hi = p.tf;
    if (t < lo - kTimeSlack || t > hi + kTimeSlack) {
        throw std::out_of_range("evaluate: time outside primitive interval");
    }
    return std::clamp(t, lo, hi) - lo;
}

// Squared norm of the per-axis cubics (b3 u^3 + b2 u^2 + b1 u + b0), one cubic
// per spatial axis, as a single degree-6 polynomial in u.
poly::Poly squared_norm_cubic(const Vec3& b3, const Vec3& b2, const Vec3& b1, const Vec3& b0) {
    poly::Poly out;
    out.degree = 6;
    out.c[6] = dot(b3, b3);
    out.c[5] = 2.0 * dot(b3, b2);
    out.c[4] = 2.0 * dot(b3, b1) + dot(b2, b2);
    out.c[3] = 2.0 * (dot(b3, b0) + dot(b2, b1));
    out.c[2] = 2.0 * dot(b2, b0) + dot(b1, b1);
    out.c[1] = 2.0 * dot(b1, b0);
    out.c[0] = dot(b0, b0);
    out.trim();
    return out;
}

}  // namespace

MotionPrimitive generate_primitive(const VehicleState& s0, double t0, const VehicleState& sf, double tf) {
    if (!is_finite(s0) || !is_finite(sf) || !std::isfinite(t0) || !std::isfinite(tf)) {
        throw std::invalid_argument("generate_primitive: non-finite input");
    }
    const double T = tf - t0;
    if (!(T > 0.0)) throw std::invalid_argument("generate_primitive: tf must exceed t0");
    if (T < kMinDuration) throw std::invalid_argument("generate_primitive: duration below 1e-6 s");

    const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;

    const Vec3 dp = sf.position - (s0.position + s0.velocity * T + s0.acceleration * (0.5 * T2));
    const Vec3 dv = sf.velocity - (s0.velocity + s0.acceleration * T);
    const Vec3 da = sf.acceleration - s0.acceleration;

    MotionPrimitive p;
    p.t0 = t0;
    p.tf = tf;
    p.initial_state = s0;
    p.a0 = (dp * 6.0 - dv * (3.0 * T) + da * (0.5 * T2)) / T5;
    p.a1 = (dp * -15.0 + dv * (7.0 * T) - da * T2) / T4;
    p.a2 = (dp * 10.0 - dv * (4.0 * T) + da * (0.5 * T2)) / T3;
    return p;
}

Vec3 evaluate(const MotionPrimitive& p, double t, int order) {
    const double u = clamp_local_time(p, t);
    const Vec3& v0 = p.initial_state.velocity;
    const Vec3& acc0 = p.initial_state.acceleration;
    switch (order) {
        case 0:
            return ((((p.a0 * u + p.a1) * u + p.a2) * u + acc0 * 0.5) * u + v0) * u + p.initial_state.position;
        case 1:
            return (((p.a0 * (5.0 * u) + p.a1 * 4.0) * u + p.a2 * 3.0) * u + acc0) * u + v0;
        case 2:
            return ((p.a0 * (20.0 * u) + p.a1 * 12.0) * u + p.a2 * 6.0) * u + acc0;
        case 3:
            return (p.a0 * (60.0 * u) + p.a1 * 24.0) * u + p.a2 * 6.0;
        default:
            throw std::invalid_argument("evaluate: order must be 0..3");
    }
}

VehicleState state_at(const MotionPrimitive& p, double t) {
    return VehicleState{evaluate(p, t, 0), evaluate(p, t, 1), evaluate(p, t, 2)};
}

double cost(const MotionPrimitive& p) {
    const double T = p.duration();
    const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;
    return 720.0 * dot(p.a0, p.a0) * T5 + 720.0 * dot(p.a0, p.a1) * T4 +
           (192.0 * dot(p.a1, p.a1) + 240.0 * dot(p.a0, p.a2)) * T3 + 144.0 * dot(p.a1, p.a2) * T2 +
           36.0 * dot(p.a2, p.a2) * T;
}

bool input_feasible(const MotionPrimitive& p, const FeasibilityLimits& limits) {
    const double T = p.duration();

    // thrust acceleration acc(u) - g, a cubic per axis
    const Vec3 b3 = p.a0 * 20.0;
    const Vec3 b2 = p.a1 * 12.0;
    const Vec3 b1 = p.a2 * 6.0;
    const Vec3 b0 = p.initial_state.acceleration - limits.gravity;
    const poly::Poly thrust_sq = squared_norm_cubic(b3, b2, b1, b0);

    const poly::RootList thrust_crit = poly::roots_on_grid(thrust_sq.derivative(), 0.0, T, kExtremaGrid, kExtremaTol);

    double f2_min = std::min(thrust_sq(0.0), thrust_sq(T));
    double f2_max = std::max(thrust_sq(0.0), thrust_sq(T));
    for (const double u : thrust_crit) {
        const double v = thrust_sq(u);
        f2_min = std::min(f2_min, v);
        f2_max = std::max(f2_max, v);
    }

    if (f2_min < kFreeFallThrust * kFreeFallThrust) return false;
    if (f2_min < limits.f_min * limits.f_min) return false;
    if (f2_max > limits.f_max * limits.f_max) return false;

    // rate bound ||jerk|| / ||acc - g||, maximized over the thrust candidate
    // grid and refined locally
    poly::Poly jerk_sq;
    {
        const Vec3 j2 = p.a0 * 60.0;
        const Vec3 j1 = p.a1 * 24.0;
        const Vec3 j0 = p.a2 * 6.0;
        jerk_sq.degree = 4;
        jerk_sq.c[4] = dot(j2, j2);
        jerk_sq.c[3] = 2.0 * dot(j2, j1);
        jerk_sq.c[2] = 2.0 * dot(j2, j0) + dot(j1, j1);
        jerk_sq.c[1] = 2.0 * dot(j1, j0);
        jerk_sq.c[0] = dot(j0, j0);
        jerk_sq.trim();
    }

    const auto ratio = [&](double u) { return jerk_sq(u) / thrust_sq(u); };

    const double step = T / kExtremaGrid;
    double best_u = 0.0;
    double best_r = ratio(0.0);
    for (int i = 1; i <= kExtremaGrid; ++i) {
        const double u = (i == kExtremaGrid) ? T : step * i;
        const double r = ratio(u);
        if (r > best_r) {
            best_r = r;
            best_u = u;
        }
    }
    for (const double u : thrust_crit) {
        const double r = ratio(u);
        if (r > best_r) {
            best_r = r;
            best_u = u;
        }
    }

    // golden-section refinement around the best candidate
    {
        double a = std::max(0.0, best_u - step);
        double b = std::min(T, best_u + step);
        constexpr double kInvPhi = 0.6180339887498949;
        double x1 = b - kInvPhi * (b - a);
        double x2 = a + kInvPhi * (b - a);
        double f1 = ratio(x1);
        double f2 = ratio(x2);
        for (int iter = 0; iter < 60 && (b - a) > kExtremaTol; ++iter) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kInvPhi * (b - a);
                f2 = ratio(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kInvPhi * (b - a);
                f1 = ratio(x1);
            }
        }
        best_r = std::max(best_r, std::max(f1, f2));
    }

    return best_r <= limits.omega_max * limits.omega_max;
}

}  // namespace cirrt
