#include "posgood/phi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "posgood/errors.hpp"

namespace posgood {

PhiTransform::PhiTransform(Fn phi, Fn dphi, std::string label)
    : phi_(std::move(phi)), dphi_(std::move(dphi)), label_(std::move(label)) {
    if (!phi_ || !dphi_) throw DomainError("phi needs a function and its derivative");
    const int n = 512;
    std::vector<double> y(n + 1);
    double scale = 0.0;
    for (int i = 0; i <= n; ++i) {
        y[i] = phi_(static_cast<double>(i) / n);
        if (!std::isfinite(y[i])) throw DomainError("phi not finite on [0,1]");
        scale = std::max(scale, std::fabs(y[i]));
    }
    for (int i = 0; i < n; ++i)
        if (!(y[i + 1] > y[i])) throw DomainError("phi must be strictly increasing on [0,1]");
    double tol = 1e-12 * std::max(scale, 1.0);
    bool convex = true, concave = true;
    for (int i = 1; i < n; ++i) {
        double d2 = y[i + 1] - 2.0 * y[i] + y[i - 1];
        convex = convex && d2 >= -tol;
        concave = concave && d2 <= tol;
    }
    shape_ = convex && concave ? PhiShape::linear
             : convex          ? PhiShape::convex
             : concave         ? PhiShape::concave
                               : PhiShape::general;
}

PhiTransform PhiTransform::identity() {
    PhiTransform p([](double x) { return x; }, [](double) { return 1.0; }, "identity");
    p.identity_ = true;
    return p;
}

PhiTransform PhiTransform::power(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("pow(r) needs r > 0");
    if (r == 1.0) return identity();
    char buf[48];
    std::snprintf(buf, sizeof buf, "pow(%.12g)", r);
    return PhiTransform([r](double x) { return x <= 0.0 ? 0.0 : std::pow(x, r); },
                        [r](double x) { return x <= 0.0 ? (r < 1.0 ? INFINITY : (r == 1.0 ? 1.0 : 0.0))
                                                        : r * std::pow(x, r - 1.0); },
                        buf);
}

const char* to_string(PhiShape s) {
    switch (s) {
        case PhiShape::linear: return "linear";
        case PhiShape::convex: return "convex";
        case PhiShape::concave: return "concave";
        default: return "general";
    }
}

}  // namespace posgood
