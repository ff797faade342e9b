#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace posgood::quad {

inline constexpr std::array<double, 5> kGlNodes = {
    0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
    0.8650633666889845107320967, 0.9739065285171717200779640};
inline constexpr std::array<double, 5> kGlWeights = {
    0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
    0.1494513491505805931457763, 0.0666713443086881375935688};

// 10-point Gauss-Legendre on [a,b]; never evaluates the endpoints
template <class Fn>
double gauss_legendre(Fn&& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a), sum = 0.0;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
        double d = h * kGlNodes[i];
        sum += kGlWeights[i] * (f(c - d) + f(c + d));
    }
    return sum * h;
}

template <class Fn>
double integrate(Fn&& f, double a, double b, int panels = 8) {
    if (!(b > a)) return 0.0;
    double w = (b - a) / panels, sum = 0.0;
    for (int i = 0; i < panels; ++i) {
        double lo = a + i * w;
        double hi = (i + 1 == panels) ? b : lo + w;
        sum += gauss_legendre(f, lo, hi);
    }
    return sum;
}

// geometric panels toward an endpoint where the integrand may blow up
// geometric remainder of the graded panels below the floor
inline double geometric_tail(double prev, double last) {
    if (prev == 0.0 || last == 0.0 || (prev > 0.0) != (last > 0.0)) return 0.0;
    double r = last / prev;
    if (!(r > 0.0 && r < 0.95)) return 0.0;
    return last * r / (1.0 - r);
}

template <class Fn>
double integrate_graded(Fn&& f, double a, double b, bool grade_lo, bool grade_hi, int panels = 8) {
    if (!(b > a)) return 0.0;
    if (grade_lo && grade_hi && panels < 2) panels = 2;
    double w = (b - a) / panels;
    double sum = 0.0;
    int first = grade_lo ? 1 : 0;
    int last = grade_hi ? panels - 1 : panels;
    for (int i = first; i < last; ++i) {
        double lo = a + i * w;
        double hi = (i + 1 == panels) ? b : lo + w;
        sum += gauss_legendre(f, lo, hi);
    }
    double floor_lo = std::max(1e-15, 4e-16 * std::fabs(a));
    double floor_hi = std::max(1e-15, 4e-16 * std::fabs(b));
    if (grade_lo) {
        double prev = 0.0, last = 0.0;
        for (double h = w; h > floor_lo; h *= 0.25) {
            prev = last;
            last = gauss_legendre(f, a + 0.25 * h, a + h);
            sum += last;
        }
        sum += geometric_tail(prev, last);
    }
    if (grade_hi) {
        double prev = 0.0, last = 0.0;
        for (double h = w; h > floor_hi; h *= 0.25) {
            prev = last;
            last = gauss_legendre(f, b - h, b - 0.25 * h);
            sum += last;
        }
        sum += geometric_tail(prev, last);
    }
    return sum;
}

// integral over [a,b] split at the cuts inside it
template <class Fn>
double integrate_split(Fn&& f, double a, double b, const std::vector<double>& cuts, bool grade_lo, bool grade_hi,
                       int panels = 4) {
    if (!(b > a)) return 0.0;
    std::vector<double> pts{a};
    for (double c : cuts)
        if (c > a && c < b) pts.push_back(c);
    pts.push_back(b);
    std::sort(pts.begin() + 1, pts.end() - 1);
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        sum += integrate_graded(f, pts[k], pts[k + 1], grade_lo && k == 0, grade_hi && k + 2 == pts.size(), panels);
    return sum;
}

}  // namespace posgood::quad
