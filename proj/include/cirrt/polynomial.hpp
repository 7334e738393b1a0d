#pragma once

#include <array>

namespace cirrt::poly {

/// Dense univariate polynomial with coefficients indexed by power: c[i] * t^i.
struct Poly {
    static constexpr int kMaxDegree = 9;

    std::array<double, kMaxDegree + 1> c{};
    int degree{0};

    double operator()(double t) const {
        double acc = c[static_cast<std::size_t>(degree)];
        for (int i = degree - 1; i >= 0; --i) acc = acc * t + c[static_cast<std::size_t>(i)];
        return acc;
    }

    Poly derivative() const {
        Poly d;
        d.degree = degree > 0 ? degree - 1 : 0;
        for (int i = 1; i <= degree; ++i) d.c[static_cast<std::size_t>(i - 1)] = c[static_cast<std::size_t>(i)] * i;
        return d;
    }

    // Drops exactly-zero leading coefficients so straight-line and hover
    // trajectories take the low-degree paths.
    void trim() {
        while (degree > 0 && c[static_cast<std::size_t>(degree)] == 0.0) --degree;
    }
};

Poly multiply(const Poly& a, const Poly& b);

struct RootList {
    std::array<double, Poly::kMaxDegree> t{};
    int count{0};

    void push(double v) { t[static_cast<std::size_t>(count++)] = v; }
    const double* begin() const { return t.data(); }
    const double* end() const { return t.data() + count; }
};

/// All real roots of p in [lo, hi], sorted ascending. Brackets come from the
/// roots of p's own derivative (recursively), so each bracket is monotone and
/// bisection converges to a true root within tol. Degrees <= 2 are closed form.
RootList roots_in_interval(const Poly& p, double lo, double hi, double tol);

/// Roots located from sign changes of p over a uniform grid of `grid_points`
/// cells on [lo, hi], refined by bisection. Cheaper than full isolation but
/// misses root pairs that fall strictly inside one grid cell.
RootList roots_on_grid(const Poly& p, double lo, double hi, int grid_points, double tol);

}  // namespace cirrt::poly
