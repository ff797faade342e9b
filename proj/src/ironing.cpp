#include "posgood/ironing.hpp"

#include <algorithm>
#include <cmath>

#include "posgood/errors.hpp"

namespace posgood {

double revenue_curve(const TypeDistribution& dist, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("revenue curve: tau outside [0,1]");
    if (tau == 1.0) return 0.0;
    return (1.0 - tau) * dist.quantile(tau);
}

namespace {

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.front() = a;
    g.back() = b;
    return g;
}

}  // namespace

SampledCurve integrated_virtual(const TypeDistribution& dist, std::size_t grid_size) {
    if (grid_size < 16) throw DomainError("integrated_virtual needs grid_size >= 16");
    SampledCurve c;
    c.tau = uniform_grid(0.0, 1.0, grid_size);
    c.values.resize(grid_size);
    // J = -dR/dtau, so J~(tau) = R(0) - R(tau)
    double r0 = revenue_curve(dist, 0.0);
    for (std::size_t i = 0; i < grid_size; ++i) c.values[i] = r0 - revenue_curve(dist, c.tau[i]);
    c.values.front() = 0.0;
    return c;
}

IroningResult convex_minorant(const std::vector<double>& x, const std::vector<double>& y, double rel_tol) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("convex_minorant needs matching samples");
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (!(x[i + 1] > x[i])) throw DomainError("convex_minorant needs increasing abscissae");
    const std::size_t n = x.size();

    // monotone chain, lower hull
    std::vector<std::size_t> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        while (v.size() >= 2) {
            std::size_t a = v[v.size() - 2], b = v.back();
            double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
            if (cross <= 0.0)
                v.pop_back();
            else
                break;
        }
        v.push_back(i);
    }

    IroningResult r;
    r.grid = x;
    r.jtilde = y;
    r.hull.resize(n);
    r.ironed_j.resize(n);
    double ymin = *std::min_element(y.begin(), y.end()), ymax = *std::max_element(y.begin(), y.end());
    double tol = rel_tol * (ymax > ymin ? ymax - ymin : 1.0);
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        std::size_t a = v[k], b = v[k + 1];
        double slope = (y[b] - y[a]) / (x[b] - x[a]);
        double gap = 0.0;
        for (std::size_t i = a; i <= b; ++i) {
            r.hull[i] = i == b ? y[b] : y[a] + slope * (x[i] - x[a]);
            r.ironed_j[i] = slope;
            gap = std::max(gap, y[i] - r.hull[i]);
        }
        if (gap > tol) r.pooled_intervals.emplace_back(x[a], x[b]);
    }
    r.hull.back() = y.back();
    r.ironed_j.back() = v.size() >= 2 ? r.ironed_j[n - 2] : 0.0;
    return r;
}

IroningResult iron(const TypeDistribution& dist, double tau_lo, std::size_t grid_size) {
    if (grid_size < 16) throw DomainError("ironing grid needs at least 16 points");
    if (!(tau_lo >= 0.0 && tau_lo < 1.0)) throw DomainError("ironing range must start in [0,1)");
    auto g = uniform_grid(tau_lo, 1.0, grid_size);
    std::vector<double> y(grid_size);
    double r0 = revenue_curve(dist, tau_lo);
    for (std::size_t i = 0; i < grid_size; ++i) y[i] = r0 - revenue_curve(dist, g[i]);
    y.front() = 0.0;
    return convex_minorant(g, y);
}

IroningResult iron_reverse(const TypeDistribution& dist, double tau_hi, std::size_t grid_size) {
    if (grid_size < 16) throw DomainError("ironing grid needs at least 16 points");
    if (!(tau_hi > 0.0 && tau_hi <= 1.0)) throw DomainError("ironing range must end in (0,1]");
    auto g = uniform_grid(0.0, tau_hi, grid_size);
    std::vector<double> y(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) y[i] = g[i] == 0.0 ? 0.0 : g[i] * dist.quantile(g[i]);
    return convex_minorant(g, y);
}

StatusAllocation allocation_from_pools(const TypeDistribution& dist, double tau_lo, double tau_hi,
                                       const std::vector<std::pair<double, double>>& pools, double offset,
                                       double gamma) {
    auto theta_of = [&](double t) {
        if (t >= 1.0) return dist.support_hi();
        return dist.quantile(t);
    };
    std::vector<Segment> segs;
    double cur = tau_lo;
    auto add_sep = [&](double a, double b) {
        double ta = theta_of(a), tb = theta_of(b);
        if (tb > ta) segs.push_back(Separation{ta, tb, offset});
    };
    for (auto [a, b] : pools) {
        a = std::max(a, tau_lo);
        b = std::min(b, tau_hi);
        if (!(b > a)) continue;
        if (a > cur) add_sep(cur, a);
        double ta = theta_of(a), tb = theta_of(b);
        if (tb > ta) segs.push_back(Pool{ta, tb, offset + a + gamma * (b - a)});
        cur = b;
    }
    if (tau_hi > cur) add_sep(cur, tau_hi);
    // keep the tiling exact after quantile round trips
    for (std::size_t i = 1; i < segs.size(); ++i) {
        double lo = segment_hi(segs[i - 1]);
        std::visit([lo](auto& s) { s.lo = lo; }, segs[i]);
    }
    return StatusAllocation(dist, std::move(segs), StatusScale::quantile, gamma);
}

StatusAllocation ironed_allocation(const TypeDistribution& dist, double theta0, std::size_t grid_size,
                                   double gamma) {
    double lo = dist.support_lo();
    if (theta0 < lo || theta0 > dist.support_hi()) throw DomainError("cutoff outside the support");
    double tau0 = dist.cdf(theta0);
    if (tau0 >= 1.0) return StatusAllocation(dist, {}, StatusScale::quantile, gamma);
    auto r = iron(dist, tau0, grid_size);
    auto alloc = allocation_from_pools(dist, tau0, 1.0, r.pooled_intervals, 0.0, gamma);
    if (alloc.segments().empty()) return alloc;
    // pin the cutoff to the requested type
    auto segs = alloc.segments();
    std::visit([theta0](auto& s) { s.lo = theta0; }, segs.front());
    return StatusAllocation(dist, std::move(segs), StatusScale::quantile, gamma);
}

}  // namespace posgood
