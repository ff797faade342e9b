#include "posgood/screening.hpp"

#include <algorithm>
#include <cmath>

#include "posgood/errors.hpp"

namespace posgood {

namespace {

void check_support(const TypeDistribution& dist, double theta) {
    if (!(theta >= dist.support_lo() && theta <= dist.support_hi()))
        throw DomainError("type outside the support");
}

double density_or_throw(const TypeDistribution& dist, double theta) {
    double f = dist.pdf(theta);
    if (!(f > 0.0) || !std::isfinite(f)) throw DomainError("undefined density: f(theta) = 0");
    return f;
}

}  // namespace

double virtual_value(const TypeDistribution& dist, double theta) {
    check_support(dist, theta);
    if (dist.bounded() && theta == dist.support_hi()) return theta;
    double f = density_or_throw(dist, theta);
    return theta - dist.survival(theta) / f;
}

double reverse_virtual(const TypeDistribution& dist, double theta) {
    check_support(dist, theta);
    if (theta == dist.support_lo()) return theta;
    double f = density_or_throw(dist, theta);
    return theta + dist.cdf(theta) / f;
}

double inverse_hazard(const TypeDistribution& dist, double theta) {
    check_support(dist, theta);
    if (dist.bounded() && theta == dist.support_hi()) return 0.0;
    return dist.survival(theta) / density_or_throw(dist, theta);
}

double virtual_value_at(const TypeDistribution& dist, double tau) {
    if (tau >= 1.0 && dist.bounded()) return dist.support_hi();
    return dist.quantile(tau) - dist.inverse_hazard_at(tau);
}

double reverse_virtual_at(const TypeDistribution& dist, double tau) {
    if (tau <= 0.0) return dist.support_lo();
    return dist.quantile(tau) + dist.reverse_hazard_at(tau);
}

double social_virtual_at(const TypeDistribution& dist, double lambda, double tau) {
    double ih = (tau >= 1.0 && dist.bounded()) ? 0.0 : dist.inverse_hazard_at(tau);
    return lambda * dist.quantile(tau) - (lambda - 1.0) * ih;
}

std::vector<double> analysis_grid(std::size_t n) {
    if (n < 2) n = 2;
    std::vector<double> g;
    g.reserve(n + 24);
    for (std::size_t i = 0; i < n; ++i) g.push_back((static_cast<double>(i) + 0.5) / static_cast<double>(n));
    double first = 0.5 / static_cast<double>(n);
    for (int k = 12; k >= 3; --k) {
        double h = std::pow(10.0, -k);
        if (h < first) {
            g.push_back(h);
            g.push_back(1.0 - h);
        }
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

MonotoneScan scan_monotone(const std::vector<double>& tau, const std::vector<double>& values) {
    MonotoneScan s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (tau[i] >= 1e-3 && tau[i] <= 1.0 - 1e-3 && std::isfinite(values[i]))
            s.scale = std::max(s.scale, std::fabs(values[i]));
    }
    if (s.scale == 0.0) {
        for (double v : values)
            if (std::isfinite(v)) s.scale = std::max(s.scale, std::fabs(v));
    }
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        double a = values[i], b = values[i + 1];
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        s.worst_decrease = std::max(s.worst_decrease, a - b);
        s.worst_increase = std::max(s.worst_increase, b - a);
    }
    return s;
}

Regularity classify(const TypeDistribution& dist, std::size_t grid) {
    auto g = analysis_grid(grid);
    std::vector<double> j(g.size()), h(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        h[i] = dist.inverse_hazard_at(g[i]);
        j[i] = dist.quantile(g[i]) - h[i];
    }
    auto sj = scan_monotone(g, j);
    auto sh = scan_monotone(g, h);
    Regularity r;
    r.regular = sj.increasing();
    r.ifr = sh.decreasing();
    r.dfr = sh.increasing();
    r.regular_violation = sj.worst_decrease;
    r.ifr_violation = sh.worst_increase;
    r.dfr_violation = sh.worst_decrease;
    auto borderline = [](double viol, double scale) { return viol > 1e-12 * scale && viol <= 1e-9 * scale; };
    r.inconclusive = borderline(sj.worst_decrease, sj.scale) || borderline(sh.worst_increase, sh.scale) ||
                     borderline(sh.worst_decrease, sh.scale);
    return r;
}

ReverseRegularity classify_reverse(const TypeDistribution& dist, std::size_t grid) {
    auto g = analysis_grid(grid);
    std::vector<double> l(g.size()), r(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        r[i] = dist.reverse_hazard_at(g[i]);
        l[i] = dist.quantile(g[i]) + r[i];
    }
    auto sl = scan_monotone(g, l);
    auto sr = scan_monotone(g, r);
    return {sl.increasing(), sr.increasing(), sr.decreasing()};
}

double virtual_root_quantile(const TypeDistribution& dist) {
    auto g = analysis_grid(2048);
    if (virtual_value_at(dist, g.front()) >= 0.0) return 0.0;
    std::size_t k = 0;
    while (k < g.size() && virtual_value_at(dist, g[k]) < 0.0) ++k;
    if (k == g.size()) return 1.0;
    double lo = g[k - 1], hi = g[k];
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        double mid = 0.5 * (lo + hi);
        (virtual_value_at(dist, mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace posgood
