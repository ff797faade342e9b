#include "posgood/value.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "posgood/errors.hpp"
#include "posgood/screening.hpp"

namespace posgood {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::vector<double> type_grid(const TypeDistribution& dist) {
    std::vector<double> out;
    for (double tau : analysis_grid(512)) out.push_back(dist.quantile(tau));
    out.push_back(dist.support_lo());
    if (dist.bounded()) out.push_back(dist.support_hi());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

ValueFunction::ValueFunction(Fn v, Fn dv, ValueMode mode, std::string label, bool affine)
    : v_(std::move(v)), dv_(std::move(dv)), mode_(mode), label_(std::move(label)), affine_(affine) {
    if (!v_ || !dv_) throw DomainError("value function needs both v and v'");
}

ValueFunction ValueFunction::zero() {
    return ValueFunction([](double) { return 0.0; }, [](double) { return 0.0; }, ValueMode::standard, "0", true);
}

ValueFunction ValueFunction::constant(double c) {
    return ValueFunction([c](double) { return c; }, [](double) { return 0.0; }, ValueMode::standard,
                         "const(" + fmt(c) + ")", true);
}

ValueFunction ValueFunction::linear(double v0, double slope) {
    ValueMode mode = slope <= -1.0 ? ValueMode::suffering : ValueMode::standard;
    return ValueFunction([v0, slope](double t) { return v0 + slope * t; }, [slope](double) { return slope; }, mode,
                         "linear(" + fmt(v0) + "," + fmt(slope) + ")", true);
}

ValueFunction ValueFunction::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    std::string label = "poly(";
    for (std::size_t i = 0; i < coeffs.size(); ++i) label += (i ? "," : "") + fmt(coeffs[i]);
    label += ")";
    bool affine = coeffs.size() <= 2;
    for (std::size_t i = 2; i < coeffs.size(); ++i) affine = affine && coeffs[i] == 0.0;
    auto v = [coeffs](double t) {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
        return acc;
    };
    auto dv = [coeffs](double t) {
        double acc = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * t + static_cast<double>(i) * coeffs[i];
        return acc;
    };
    return ValueFunction(v, dv, ValueMode::standard, label, affine);
}

ValueFunction ValueFunction::sqrt_shift(double shift, double scale) {
    if (!(shift > 0.0)) throw DomainError("sqrt value needs a positive shift (finite slope at 0)");
    if (!(scale >= 0.0)) throw DomainError("sqrt value needs a nonnegative scale");
    std::string label = scale == 1.0 ? "sqrt(" + fmt(shift) + ")" : "sqrt(" + fmt(shift) + "," + fmt(scale) + ")";
    return ValueFunction([shift, scale](double t) { return scale * std::sqrt(t + shift); },
                         [shift, scale](double t) { return 0.5 * scale / std::sqrt(t + shift); }, ValueMode::standard,
                         label, scale == 0.0);
}

ValueFunction ValueFunction::suffering(double v0, double slope) {
    if (!(slope <= -1.0)) throw DomainError("suffering value needs slope <= -1");
    return ValueFunction([v0, slope](double t) { return v0 + slope * t; }, [slope](double) { return slope; },
                         ValueMode::suffering, "suffering(" + fmt(v0) + "," + fmt(slope) + ")", true);
}

double max_abs_slope(const ValueFunction& v, const TypeDistribution& dist) {
    double m = 0.0;
    for (double t : type_grid(dist)) m = std::max(m, std::fabs(v.slope(t)));
    return m;
}

ValueRegime detect_regime(const ValueFunction& v, const TypeDistribution& dist) {
    const double tol = 1e-12;
    bool all_nonneg = true, all_below = true, all_nonpos = true;
    for (double t : type_grid(dist)) {
        double d = v.slope(t);
        if (!std::isfinite(d)) return ValueRegime::invalid;
        all_nonneg = all_nonneg && d >= -tol;
        all_below = all_below && d <= -1.0 + tol;
        all_nonpos = all_nonpos && d <= tol;
    }
    if (all_nonneg) return ValueRegime::standard;
    if (all_below) return ValueRegime::suffering;
    if (all_nonpos) return ValueRegime::countervailing;
    return ValueRegime::invalid;
}

ValueCheck validate(const ValueFunction& v, const TypeDistribution& dist) {
    ValueCheck out;
    out.regime = detect_regime(v, dist);
    auto grid = type_grid(dist);
    const double tol = 1e-10;
    if (v.mode() == ValueMode::suffering) {
        for (double t : grid) {
            double excess = v.slope(t) + 1.0;
            if (excess > out.worst) out.worst = excess;
        }
        if (out.worst > tol) {
            out.ok = false;
            out.reason = "suffering mode needs v' <= -1";
        }
        return out;
    }
    double prev_slope = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double t = grid[i], val = v(t), d = v.slope(t);
        if (!std::isfinite(val) || !std::isfinite(d)) {
            out.ok = false;
            out.reason = "v or v' not finite on the support";
            return out;
        }
        if (-val > tol && -val > out.worst) {
            out.worst = -val;
            out.reason = "v must be nonnegative";
        }
        if (-d > tol && -d > out.worst) {
            out.worst = -d;
            out.reason = "v' must be nonnegative";
        }
        double scale = std::max(1.0, std::fabs(prev_slope));
        if (i > 0 && d - prev_slope > tol * scale && d - prev_slope > out.worst) {
            out.worst = d - prev_slope;
            out.reason = "v must be concave";
        }
        prev_slope = d;
    }
    out.ok = out.reason.empty();
    return out;
}

}  // namespace posgood
