#include "posgood/no_exclusion.hpp"

#include <algorithm>
#include <cmath>

#include "posgood/errors.hpp"
#include "posgood/ironing.hpp"
#include "posgood/optimize.hpp"
#include "posgood/quadrature.hpp"
#include "posgood/screening.hpp"

namespace posgood {

namespace {

double theta_at(const TypeDistribution& dist, double tau) {
    if (tau >= 1.0) return dist.support_hi();
    return dist.quantile(tau);
}

}  // namespace

NoExclusionOptimum revmax_no_exclusion(const TypeDistribution& dist, const ValueFunction& v) {
    double lo = dist.support_lo();
    bool regular = classify(dist).regular;
    auto alloc = regular ? StatusAllocation::full_separation(dist, lo) : ironed_allocation(dist, lo);
    double u0 = lo * alloc(lo) + v(lo);
    Mechanism m(alloc, v, u0);
    return {m, revenue(alloc, v, u0, Orientation::standard, false), alloc.has_pools()};
}

TwoLevelOptimum two_level_optimum(const TypeDistribution& dist) {
    TwoLevelOptimum r;
    auto zero = ValueFunction::zero();
    double lo = dist.support_lo();
    double top = dist.bounded() ? 1.0 : 1.0 - 1e-9;
    // the buyer of the high level is the type indifferent at theta* (s_H - s_L) = p
    auto menu_revenue = [&](double t) {
        double th = theta_at(dist, t);
        return 0.5 * th * (1.0 - t);
    };
    auto best = maximize(menu_revenue, 0.0, top);
    r.cutoff = theta_at(dist, best.x);
    if (r.cutoff > lo && r.cutoff < dist.support_hi()) {
        PartitionMenu menu{{lo, r.cutoff, dist.support_hi()}, {}};
        auto alloc = induced_status(menu, dist);
        Mechanism m(alloc, zero, lo * alloc(lo));
        r.r2 = revenue(alloc, zero, m.boundary_utility(), Orientation::standard, false);
        r.price = m.payment(r.cutoff);
    }
    auto posted = maximize([&](double t) { return theta_at(dist, t) * (1.0 - t); }, 0.0, top);
    r.half_posted_price = 0.5 * posted.value;
    r.max_revenue = revmax_no_exclusion(dist, zero).revenue;
    r.ratio = r.r2 / r.max_revenue;
    r.guarantee_holds = r.ratio >= 0.5;
    return r;
}

namespace {

// I(tau) = int_0^tau ((1-u) q(u) - mean) du on the analysis grid
ConditionReport integrated_condition(const TypeDistribution& dist) {
    double mu = dist.mean();
    if (!std::isfinite(mu)) throw DomainError("condition needs a finite mean");
    auto g = analysis_grid(2048);
    auto knots = dist.quantile_knots();
    g.insert(g.end(), knots.begin(), knots.end());
    std::sort(g.begin(), g.end());
    ConditionReport r;
    double acc = 0.0, prev = 0.0, scale = mu, worst_abs = 0.0;
    for (double t : g) {
        acc += quad::integrate_graded([&](double u) { return dist.inverse_hazard_at(u) - mu; }, prev, t, prev <= 0.0,
                                      false, 1);
        prev = t;
        worst_abs = std::max(worst_abs, std::fabs(acc));
        r.worst_violation = std::max(r.worst_violation, -acc);
    }
    double tol = 1e-9 * std::max(scale, 1e-300);
    r.holds = r.worst_violation <= tol;
    r.boundary = worst_abs <= tol;
    if (r.holds) r.worst_violation = 0.0;
    return r;
}

}  // namespace

ConditionReport pooling_cs_condition(const TypeDistribution& dist) { return integrated_condition(dist); }

ConditionReport mean_residual_life_condition(const TypeDistribution& dist) {
    double mu = dist.mean();
    if (!std::isfinite(mu)) throw DomainError("condition needs a finite mean");
    auto g = analysis_grid(2048);
    auto knots = dist.quantile_knots();
    g.insert(g.end(), knots.begin(), knots.end());
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    // grid truncated at 1 - 1e-9
    while (!g.empty() && g.back() > 1.0 - 1e-9) g.pop_back();
    // E[theta - t | theta > t] = int_tau^1 (1-u) q(u) du / (1 - tau)
    std::vector<double> tail(g.size(), 0.0);
    double acc = 0.0, upper = 1.0;
    for (std::size_t k = g.size(); k-- > 0;) {
        acc += quad::integrate_graded([&](double u) { return dist.inverse_hazard_at(u); }, g[k], upper, false,
                                      upper >= 1.0, 2);
        upper = g[k];
        tail[k] = acc;
    }
    ConditionReport r;
    double worst_abs = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        double mrl = tail[k] / (1.0 - g[k]);
        r.worst_violation = std::max(r.worst_violation, mrl - mu);
        worst_abs = std::max(worst_abs, std::fabs(mrl - mu));
    }
    double tol = 1e-7 * mu;
    r.holds = r.worst_violation <= tol;
    r.boundary = worst_abs <= tol;
    if (r.holds) r.worst_violation = 0.0;
    return r;
}

ConditionReport uniform_dominance_condition(const TypeDistribution& dist) {
    if (!dist.bounded()) throw DomainError("uniform dominance needs bounded support");
    double hi = dist.support_hi();
    ConditionReport r;
    double worst_abs = 0.0;
    for (double t : analysis_grid(2048)) {
        double th = dist.quantile(t);
        double gap = t * hi - th;
        r.worst_violation = std::max(r.worst_violation, gap);
        worst_abs = std::max(worst_abs, std::fabs(gap));
    }
    double tol = 1e-12 * hi;
    r.holds = r.worst_violation <= tol;
    r.boundary = worst_abs <= tol;
    if (r.holds) r.worst_violation = 0.0;
    return r;
}

double utility_gain_over_pooling(const StatusAllocation& s) {
    const auto& dist = s.distribution();
    double lo = dist.support_lo(), worst = -INFINITY;
    auto g = analysis_grid(1024);
    double prev = lo, acc = 0.0;
    for (double t : g) {
        double th = dist.quantile(t);
        acc += s.integral(prev, th) - 0.5 * (th - prev);
        prev = th;
        worst = std::max(worst, acc);
    }
    return worst;
}

bool separation_at_top_check(const Mechanism& m) { return m.allocation().separates_top(); }

}  // namespace posgood
