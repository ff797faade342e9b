#include "posgood/mechanisms.hpp"

#include <algorithm>
#include <cmath>

#include "posgood/errors.hpp"
#include "posgood/feasibility.hpp"
#include "posgood/ironing.hpp"
#include "posgood/optimize.hpp"
#include "posgood/quadrature.hpp"

namespace posgood {

namespace {

double theta_at(const TypeDistribution& dist, double tau) {
    if (tau >= 1.0) return dist.support_hi();
    return dist.quantile(tau);
}

// integral of g(tau) over the participants, split at the allocation's breakpoints
template <class G>
double over_participants(const StatusAllocation& a, G&& g) {
    double lo = a.cutoff_quantile(), hi = a.upper_quantile();
    if (!(hi > lo)) return 0.0;
    std::vector<double> q{lo, hi};
    for (double t : a.quantile_breakpoints())
        if (t > lo && t < hi) q.push_back(t);
    for (double t : a.distribution().quantile_knots())
        if (t > lo && t < hi) q.push_back(t);
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < q.size(); ++k)
        acc += quad::integrate_graded(g, q[k], q[k + 1], q[k] <= 0.0, q[k + 1] >= 1.0, 4);
    return acc;
}

double participant_mass(const StatusAllocation& a) { return std::max(0.0, a.upper_quantile() - a.cutoff_quantile()); }

void require_feasible(const StatusAllocation& a) {
    auto r = check_weak_majorization(a);
    if (!r.feasible) throw InfeasibleAllocation("status allocation violates weak majorization");
}

double marginal_type(const StatusAllocation& a, Orientation o) {
    return o == Orientation::standard ? a.cutoff() : a.upper();
}

double search_top(const TypeDistribution& dist) { return dist.bounded() ? 1.0 : 1.0 - 1e-9; }

}  // namespace

Mechanism::Mechanism(StatusAllocation alloc, ValueFunction value, double boundary_utility, Orientation orientation)
    : alloc_(std::move(alloc)), value_(std::move(value)), u0_(boundary_utility), orientation_(orientation) {
    if (!std::isfinite(u0_)) throw DomainError("boundary utility must be finite");
}

double Mechanism::cutoff() const { return marginal_type(alloc_, orientation_); }

double Mechanism::utility(double theta) const {
    if (!participates(theta)) return 0.0;
    double t0 = cutoff();
    double path = orientation_ == Orientation::standard ? alloc_.integral(t0, theta) : -alloc_.integral(theta, t0);
    return u0_ + path + value_(theta) - value_(t0);
}

double Mechanism::payment(double theta) const {
    if (!participates(theta)) return 0.0;
    return theta * alloc_(theta) + value_(theta) - utility(theta);
}

double revenue(const StatusAllocation& alloc, const ValueFunction& v, double u0, Orientation o, bool check) {
    if (check) require_feasible(alloc);
    double mass = participant_mass(alloc);
    if (mass <= 0.0) return 0.0;
    const auto& dist = alloc.distribution();
    double t0 = marginal_type(alloc, o);
    double integral = o == Orientation::standard
                          ? over_participants(alloc, [&](double t) { return virtual_value_at(dist, t) * alloc.at_quantile(t); })
                          : over_participants(alloc, [&](double t) { return reverse_virtual_at(dist, t) * alloc.at_quantile(t); });
    return integral + (v(t0) - u0) * mass;
}

double consumer_surplus(const StatusAllocation& alloc, const ValueFunction& v, double u0, Orientation o, bool check) {
    if (check) require_feasible(alloc);
    double mass = participant_mass(alloc);
    if (mass <= 0.0) return 0.0;
    const auto& dist = alloc.distribution();
    if (o == Orientation::standard) {
        double integral = over_participants(alloc, [&](double t) {
            return dist.inverse_hazard_at(t) * (alloc.at_quantile(t) + v.slope(theta_at(dist, t)));
        });
        return integral + u0 * mass;
    }
    double integral = over_participants(alloc, [&](double t) {
        return dist.reverse_hazard_at(t) * (alloc.at_quantile(t) + v.slope(theta_at(dist, t)));
    });
    return u0 * mass - integral;
}

double social_welfare(const StatusAllocation& alloc, const ValueFunction& v, double lambda, double u0, Orientation o,
                      bool check) {
    if (!(lambda >= 0.0)) throw DomainError("welfare weight must be nonnegative");
    if (check) require_feasible(alloc);
    if (o == Orientation::suffering)
        return lambda * revenue(alloc, v, u0, o, false) + consumer_surplus(alloc, v, u0, o, false);
    const auto& dist = alloc.distribution();
    double integral = over_participants(alloc, [&](double t) {
        double th = theta_at(dist, t);
        double ih = t >= 1.0 ? 0.0 : dist.inverse_hazard_at(t);
        return social_virtual_at(dist, lambda, t) * alloc.at_quantile(t) + lambda * v(th) -
               (lambda - 1.0) * ih * v.slope(th);
    });
    return integral - (lambda - 1.0) * u0 * participant_mass(alloc);
}

double revenue(const Mechanism& m) {
    return revenue(m.allocation(), m.value(), m.boundary_utility(), m.orientation());
}

double consumer_surplus(const Mechanism& m) {
    return consumer_surplus(m.allocation(), m.value(), m.boundary_utility(), m.orientation());
}

double social_welfare(const Mechanism& m, double lambda) {
    return social_welfare(m.allocation(), m.value(), lambda, m.boundary_utility(), m.orientation());
}

double revenue_direct(const Mechanism& m) {
    const auto& dist = m.distribution();
    return over_participants(m.allocation(), [&](double t) { return m.payment(theta_at(dist, t)); });
}

double consumer_surplus_direct(const Mechanism& m) {
    const auto& dist = m.distribution();
    return over_participants(m.allocation(), [&](double t) { return m.utility(theta_at(dist, t)); });
}

EvalReport evaluate(const Mechanism& m, double lambda) {
    EvalReport r;
    r.revenue = revenue(m);
    r.consumer_surplus = consumer_surplus(m);
    r.lambda = lambda;
    r.social_welfare = social_welfare(m, lambda);
    r.exclusion_mass = 1.0 - participant_mass(m.allocation());
    const auto& dist = m.distribution();
    for (int i = 0; i < 10; ++i) {
        double th = dist.quantile(0.05 + 0.1 * i);
        r.utility_samples.emplace_back(th, m.utility(th));
    }
    return r;
}

bool no_exclusion_condition(const TypeDistribution& dist, const ValueFunction& v) {
    double lo = dist.support_lo();
    double f = dist.pdf(lo);
    if (!(f > 0.0) || !std::isfinite(f)) return false;
    return v(lo) >= (v.slope(lo) + 1.0) / f;
}

ExclusionOptimum optimal_exclusion(const TypeDistribution& dist, const ValueFunction& v) {
    auto reg = classify(dist);
    double top = search_top(dist);
    ScalarMax best;
    if (reg.regular) {
        // tau0 R(tau0) + int_tau0^1 R + v(theta0)(1 - tau0)
        auto objective = [&](double t0) {
            double area = quad::integrate_graded([&](double t) { return revenue_curve(dist, t); }, t0, 1.0, false,
                                                 !dist.bounded(), 4);
            return t0 * revenue_curve(dist, t0) + area + v(theta_at(dist, t0)) * (1.0 - t0);
        };
        best = maximize(objective, 0.0, top);
        double th = theta_at(dist, best.x);
        auto alloc = StatusAllocation::full_separation(dist, th);
        return {th, best.x, revenue(alloc, v, 0.0, Orientation::standard, false), false, alloc};
    }
    auto objective = [&](double t0) {
        double th = theta_at(dist, t0);
        return revenue(ironed_allocation(dist, th, 2048), v, 0.0, Orientation::standard, false);
    };
    best = maximize(objective, 0.0, top, 256);
    double th = theta_at(dist, best.x);
    auto alloc = ironed_allocation(dist, th);
    return {th, best.x, revenue(alloc, v, 0.0, Orientation::standard, false), alloc.has_pools(), alloc};
}

double max_revenue_without_exclusion(const TypeDistribution& dist, const ValueFunction& v) {
    auto alloc = classify(dist).regular ? StatusAllocation::full_separation(dist, dist.support_lo())
                                        : ironed_allocation(dist, dist.support_lo());
    return revenue(alloc, v, 0.0, Orientation::standard, false);
}

ExclusionGain exclusion_gain(const TypeDistribution& dist, const ValueFunction& v) {
    ExclusionGain g;
    g.with_exclusion = optimal_exclusion(dist, v).revenue;
    g.without_exclusion = max_revenue_without_exclusion(dist, v);
    g.gain = g.with_exclusion / g.without_exclusion - 1.0;
    return g;
}

Mechanism payment_schedule(const StatusAllocation& alloc, const ValueFunction& v) {
    return Mechanism(alloc, v, 0.0, Orientation::standard);
}

SingleGoodOptimum single_good_optimum(const TypeDistribution& dist, const ValueFunction& v) {
    auto price_at = [&](double t) {
        double th = theta_at(dist, t);
        return th * (1.0 + t) / 2.0 + v(th);
    };
    auto best = maximize([&](double t) { return price_at(t) * (1.0 - t); }, 0.0, search_top(dist));
    SingleGoodOptimum r;
    r.cutoff = theta_at(dist, best.x);
    r.price = price_at(best.x);
    r.revenue = best.value;
    r.max_revenue = optimal_exclusion(dist, v).revenue;
    r.ratio = r.revenue / r.max_revenue;
    r.guarantee_holds = r.ratio >= 0.5;
    return r;
}

Mechanism cs_max_budget_balanced(const TypeDistribution& dist, const ValueFunction& v) {
    auto alloc = StatusAllocation::full_separation(dist, dist.support_lo());
    // everyone participates, so revenue falls one-for-one with U(lo)
    double u0 = revenue(alloc, v, 0.0, Orientation::standard, false);
    return Mechanism(alloc, v, u0);
}

NonnegCsOptimum cs_max_nonneg_price(const TypeDistribution& dist, const ValueFunction& v, double gamma) {
    auto reg = classify(dist);
    double lo = dist.support_lo();
    bool pool_ok = reg.ifr && gamma >= 0.5;
    bool sep_ok = reg.dfr && gamma <= 0.5;
    if (pool_ok) {
        auto alloc = StatusAllocation::total_pooling(dist, lo, gamma);
        // zero price at the bottom, hence everywhere
        double u0 = lo * alloc(lo) + v(lo);
        return {Mechanism(alloc, v, u0), CsBranch::pooling, sep_ok};
    }
    if (sep_ok) {
        auto alloc = StatusAllocation::full_separation(dist, lo);
        double u0 = lo * alloc(lo) + v(lo);
        return {Mechanism(alloc, v, u0), CsBranch::separation, false};
    }
    throw InapplicableCondition("distribution is neither IFR nor DFR (for this gamma)");
}

SocialOptimum social_optimum(const TypeDistribution& dist, const ValueFunction& v, double lambda, bool nonneg) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("welfare weight must be nonnegative");
    if (!nonneg && lambda < 1.0) throw DomainError("negative prices need lambda >= 1");
    if (nonneg) {
        auto g = analysis_grid(2048);
        std::vector<double> j(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) j[i] = social_virtual_at(dist, lambda, g[i]);
        if (!scan_monotone(g, j).increasing())
            throw InapplicableCondition("J_lambda is not increasing under nonnegative prices");
    }
    double lo = dist.support_lo();
    // boundary utility: zero once types are excluded; with everyone served and
    // lambda < 1 the planner sets the lowest price to zero instead
    auto u0_for = [&](double th) {
        if (nonneg && lambda < 1.0 && th <= lo) return lo * dist.cdf(lo) + v(lo);
        return 0.0;
    };
    auto welfare_at = [&](double t0) {
        double th = theta_at(dist, t0);
        auto alloc = StatusAllocation::full_separation(dist, th);
        return social_welfare(alloc, v, lambda, u0_for(th), Orientation::standard, false);
    };
    double t0 = 0.0;
    if (lambda != 1.0) t0 = maximize(welfare_at, 0.0, search_top(dist)).x;
    double th = theta_at(dist, t0);
    auto alloc = StatusAllocation::full_separation(dist, th);
    Mechanism m(alloc, v, u0_for(th));
    return {m, th, social_welfare(alloc, v, lambda, u0_for(th), Orientation::standard, false)};
}

}  // namespace posgood
