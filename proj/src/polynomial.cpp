#include "cirrt/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace cirrt::poly {

namespace {

double bisect(const Poly& p, double a, double b, double fa, double tol) {
    // fa and p(b) have opposite signs on entry
    for (int iter = 0; iter < 200 && (b - a) > tol; ++iter) {
        const double m = 0.5 * (a + b);
        const double fm = p(m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

void push_sorted_unique(RootList& roots, double v, double tol) {
    if (roots.count > 0 && v - roots.t[static_cast<std::size_t>(roots.count - 1)] <= tol) return;
    roots.push(v);
}

}  // namespace

Poly multiply(const Poly& a, const Poly& b) {
    if (a.degree + b.degree > Poly::kMaxDegree) throw std::invalid_argument("poly::multiply: degree overflow");
    Poly out;
    out.degree = a.degree + b.degree;
    for (int i = 0; i <= a.degree; ++i) {
        for (int j = 0; j <= b.degree; ++j) {
            out.c[static_cast<std::size_t>(i + j)] += a.c[static_cast<std::size_t>(i)] * b.c[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

RootList roots_in_interval(const Poly& p_in, double lo, double hi, double tol) {
    RootList roots;
    if (!(hi > lo)) return roots;

    Poly p = p_in;
    p.trim();

    if (p.degree == 0) return roots;

    if (p.degree == 1) {
        const double r = -p.c[0] / p.c[1];
        if (r >= lo && r <= hi) roots.push(r);
        return roots;
    }

    if (p.degree == 2) {
        const double a = p.c[2], b = p.c[1], c = p.c[0];
        const double disc = b * b - 4.0 * a * c;
        if (disc < 0.0) return roots;
        const double sq = std::sqrt(disc);
        // q-form keeps the subtraction cancellation-free
        const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
        double r1 = q / a;
        double r2 = (q != 0.0) ? c / q : r1;
        if (r1 > r2) std::swap(r1, r2);
        if (r1 >= lo && r1 <= hi) push_sorted_unique(roots, r1, tol);
        if (r2 >= lo && r2 <= hi) push_sorted_unique(roots, r2, tol);
        return roots;
    }

    const RootList turning = roots_in_interval(p.derivative(), lo, hi, tol);

    std::array<double, Poly::kMaxDegree + 2> brackets{};
    int n_brackets = 0;
    brackets[static_cast<std::size_t>(n_brackets++)] = lo;
    for (const double t : turning) {
        if (t > lo && t < hi) brackets[static_cast<std::size_t>(n_brackets++)] = t;
    }
    brackets[static_cast<std::size_t>(n_brackets++)] = hi;

    double fa = p(brackets[0]);
    for (int i = 0; i + 1 < n_brackets; ++i) {
        const double a = brackets[static_cast<std::size_t>(i)];
        const double b = brackets[static_cast<std::size_t>(i + 1)];
        const double fb = p(b);
        if (fa == 0.0) {
            push_sorted_unique(roots, a, tol);
        } else if ((fa < 0.0) != (fb < 0.0)) {
            push_sorted_unique(roots, bisect(p, a, b, fa, tol), tol);
        }
        fa = fb;
    }
    if (fa == 0.0) push_sorted_unique(roots, hi, tol);
    return roots;
}

RootList roots_on_grid(const Poly& p_in, double lo, double hi, int grid_points, double tol) {
    RootList roots;
    if (!(hi > lo) || grid_points < 1) return roots;

    Poly p = p_in;
    p.trim();
    if (p.degree == 0) return roots;

    const double step = (hi - lo) / grid_points;
    double a = lo;
    double fa = p(a);
    for (int i = 1; i <= grid_points; ++i) {
        const double b = (i == grid_points) ? hi : lo + step * i;
        const double fb = p(b);
        if (fa == 0.0) {
            if (roots.count < Poly::kMaxDegree) push_sorted_unique(roots, a, tol);
        } else if ((fa < 0.0) != (fb < 0.0)) {
            if (roots.count < Poly::kMaxDegree) push_sorted_unique(roots, bisect(p, a, b, fa, tol), tol);
        }
        a = b;
        fa = fb;
    }
    if (fa == 0.0 && roots.count < Poly::kMaxDegree) push_sorted_unique(roots, hi, tol);
    return roots;
}

}  // namespace cirrt::poly
