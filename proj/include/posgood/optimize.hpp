#pragma once

#include <cmath>
#include <limits>

namespace posgood {

struct ScalarMax {
    double x = 0.0;
    double value = -std::numeric_limits<double>::infinity();
};

// coarse scan then golden section around the best cell; ties go to the smaller x
template <class Fn>
ScalarMax maximize(Fn&& f, double a, double b, int coarse = 512, double xtol = 1e-13) {
    ScalarMax best{a, f(a)};
    if (!(b > a)) return best;
    int best_i = 0;
    double h = (b - a) / coarse;
    for (int i = 1; i <= coarse; ++i) {
        double x = (i == coarse) ? b : a + i * h;
        double y = f(x);
        if (y > best.value) {
            best = {x, y};
            best_i = i;
        }
    }
    double lo = best_i == 0 ? a : a + (best_i - 1) * h;
    double hi = best_i == coarse ? b : a + (best_i + 1) * h;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    double tol = xtol * std::fmax(1.0, std::fabs(b - a));
    while (hi - lo > tol) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    double xm = 0.5 * (lo + hi), fm = f(xm);
    if (fm > best.value) best = {xm, fm};
    return best;
}

// root of a sign-changing function on [a,b]
template <class Fn>
double bisect(Fn&& f, double a, double b, double xtol = 1e-14) {
    double fa = f(a);
    for (int it = 0; it < 400 && b - a > xtol; ++it) {
        double m = 0.5 * (a + b), fm = f(m);
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace posgood
