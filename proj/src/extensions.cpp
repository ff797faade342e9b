#include "posgood/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "posgood/errors.hpp"
#include "posgood/feasibility.hpp"
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

double search_top(const TypeDistribution& dist) { return dist.bounded() ? 1.0 : 1.0 - 1e-9; }

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

CostFunction::CostFunction(Fn c, Fn dc, std::string label)
    : c_(std::move(c)), dc_(std::move(dc)), label_(std::move(label)) {
    if (!c_ || !dc_) throw DomainError("cost needs c and c'");
    const int n = 256;
    double prev = dc_(0.0);
    if (std::fabs(c_(0.0)) > 1e-12) throw DomainError("cost must vanish at zero quality");
    for (int i = 1; i <= n; ++i) {
        double d = dc_(10.0 * i / n);
        if (!(d > prev)) throw DomainError("cost must be strictly convex (c' strictly increasing)");
        prev = d;
    }
    if (dc_(1e-9) < 0.0) throw DomainError("cost must be increasing");
}

CostFunction CostFunction::quadratic(double k) {
    if (!(k > 0.0)) throw DomainError("quadratic cost needs k > 0");
    return CostFunction([k](double q) { return 0.5 * k * q * q; }, [k](double q) { return k * q; },
                        "quadratic(" + fmt(k) + ")");
}

CostFunction CostFunction::power(double k, double r) {
    if (!(k > 0.0) || !(r > 1.0)) throw DomainError("power cost needs k > 0 and r > 1");
    return CostFunction([k, r](double q) { return k * std::pow(std::max(q, 0.0), r); },
                        [k, r](double q) { return k * r * std::pow(std::max(q, 0.0), r - 1.0); },
                        "power(" + fmt(k) + "," + fmt(r) + ")");
}

double CostFunction::marginal_inverse(double y) const {
    if (y <= dc_(0.0)) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (dc_(hi) < y) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw DomainError("marginal cost never reaches the target");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        (dc_(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

QualitySchedule::QualitySchedule(TypeDistribution dist, CostFunction cost, double cutoff)
    : dist_(std::move(dist)), cost_(std::move(cost)), cutoff_(cutoff) {}

double QualitySchedule::quality(double theta) const {
    if (theta < cutoff_) return 0.0;
    return cost_.marginal_inverse(virtual_value(dist_, std::min(theta, dist_.support_hi())));
}

double QualitySchedule::status(double theta) const { return theta < cutoff_ ? 0.0 : dist_.cdf(theta); }

double QualitySchedule::payment(double theta) const {
    if (theta < cutoff_) return 0.0;
    double path = dist_.integral_cdf(cutoff_, theta) +
                  quad::integrate([&](double x) { return quality(x); }, cutoff_, theta, 16);
    return theta * (status(theta) + quality(theta)) - path;
}

IntrinsicOptimum intrinsic_quality_optimum(const TypeDistribution& dist, const CostFunction& cost) {
    if (!classify(dist).regular) throw InapplicableCondition("intrinsic-quality optimum needs a regular distribution");
    double tau0 = virtual_root_quantile(dist);
    double theta0 = theta_at(dist, tau0);
    QualitySchedule sched(dist, cost, theta0);
    auto integrand = [&](double t, bool with_status) {
        double j = virtual_value_at(dist, t);
        double q = cost.marginal_inverse(j);
        return j * ((with_status ? t : 0.0) + q) - cost(q);
    };
    bool grade_hi = !dist.bounded();
    auto knots = dist.quantile_knots();
    int panels = knots.empty() ? 16 : 2;
    double with = quad::integrate_split([&](double t) { return integrand(t, true); }, tau0, 1.0, knots, tau0 <= 0.0,
                                        grade_hi, panels);
    double pure = quad::integrate_split([&](double t) { return integrand(t, false); }, tau0, 1.0, knots, tau0 <= 0.0,
                                        grade_hi, panels);
    return {theta0, with, pure, with - pure, sched};
}

PhiConditions phi_condition_check(const TypeDistribution& dist, const PhiTransform& phi, double lambda) {
    PhiConditions c;
    c.shape = phi.shape();
    c.lambda = lambda;
    c.base = classify(dist);
    auto g = analysis_grid(2048);
    std::vector<double> jp(g.size()), hp(g.size()), sp(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double d = phi.derivative(g[i]);
        double h = dist.inverse_hazard_at(g[i]);
        jp[i] = (dist.quantile(g[i]) - h) * d;
        hp[i] = h * d;
        sp[i] = social_virtual_at(dist, lambda, g[i]) * d;
    }
    auto sh = scan_monotone(g, hp);
    c.virtual_phi_increasing = scan_monotone(g, jp).increasing();
    c.hazard_phi_decreasing = sh.decreasing();
    c.hazard_phi_increasing = sh.increasing();
    c.social_phi_increasing = scan_monotone(g, sp).increasing();

    std::vector<double> s0(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) s0[i] = social_virtual_at(dist, lambda, g[i]);
    bool social_base = scan_monotone(g, s0).increasing();
    switch (c.shape) {
        case PhiShape::linear:
            c.revenue_result = c.base.regular;
            c.cs_pooling_result = c.base.ifr;
            c.cs_separation_result = c.base.dfr;
            c.social_result = social_base;
            break;
        case PhiShape::convex:
            c.revenue_result = c.base.regular;
            c.cs_pooling_result = c.hazard_phi_decreasing;
            c.cs_separation_result = c.base.dfr;
            c.social_result = social_base;
            break;
        case PhiShape::concave:
            c.revenue_result = c.virtual_phi_increasing;
            c.cs_pooling_result = c.base.ifr;
            c.cs_separation_result = c.hazard_phi_increasing;
            c.social_result = c.social_phi_increasing;
            break;
        case PhiShape::general:
            break;
    }
    return c;
}

PhiOptimum phi_transformed_optimum(const TypeDistribution& dist, const ValueFunction& v, const PhiTransform& phi) {
    auto cond = phi_condition_check(dist, phi);
    if (!cond.revenue_result)
        throw InapplicableCondition(std::string("revenue characterization does not cover this phi (shape ") +
                                    to_string(cond.shape) + ")");
    auto knots = dist.quantile_knots();
    auto objective = [&](double t0) {
        double area = quad::integrate_split([&](double t) { return virtual_value_at(dist, t) * phi(t); }, t0, 1.0,
                                            knots, t0 <= 0.0, !dist.bounded(), knots.empty() ? 4 : 1);
        return area + v(theta_at(dist, t0)) * (1.0 - t0);
    };
    auto best = maximize(objective, 0.0, search_top(dist));
    double th = theta_at(dist, best.x);
    auto alloc = StatusAllocation::full_separation(dist, th).with_phi(phi);
    Mechanism m(alloc, v, 0.0);
    return {m, th, revenue(alloc, v, 0.0, Orientation::standard, false)};
}

NegativeStatusOptimum negative_status_optimum(const TypeDistribution& dist, const ValueFunction& v, double bound) {
    if (!classify(dist).regular) throw InapplicableCondition("negative-status optimum needs a regular distribution");
    auto check = validate(v, dist);
    if (v.mode() != ValueMode::standard || !check.ok)
        throw DomainError("negative-status optimum needs an increasing concave value: " + check.reason);
    double slope_max = max_abs_slope(v, dist);
    if (bound <= 0.0) bound = 1.0 + slope_max;
    if (bound < slope_max) throw DomainError("status bound M is below max |v'|");

    double tau1 = virtual_root_quantile(dist);
    double theta1 = theta_at(dist, tau1);
    std::vector<Segment> segs;
    double lo = dist.support_lo();
    if (theta1 > lo) segs.push_back(Profile{lo, theta1, [v](double t) { return -v.slope(t); }, "-v'"});
    if (dist.support_hi() > theta1) segs.push_back(Separation{theta1, dist.support_hi()});
    StatusAllocation alloc(dist, std::move(segs));
    Mechanism m(alloc, v, 0.0);

    auto excl = optimal_exclusion(dist, v);
    auto base = payment_schedule(excl.allocation, v);
    NegativeStatusOptimum r{m, theta1, bound};
    r.revenue = revenue(m);
    r.consumer_surplus = consumer_surplus(m);
    r.exclusion_revenue = revenue(base);
    r.exclusion_consumer_surplus = consumer_surplus(base);
    r.revenue_delta = r.revenue - r.exclusion_revenue;
    r.consumer_surplus_delta = r.consumer_surplus - r.exclusion_consumer_surplus;
    return r;
}

namespace {

StatusAllocation suffering_allocation(const TypeDistribution& dist, double tau0, bool l_increasing,
                                      std::size_t grid) {
    double offset = 1.0 - tau0;
    double theta0 = theta_at(dist, tau0);
    if (l_increasing) return StatusAllocation(dist, {Separation{dist.support_lo(), theta0, offset}});
    auto r = iron_reverse(dist, tau0, grid);
    return allocation_from_pools(dist, 0.0, tau0, r.pooled_intervals, offset);
}

}  // namespace

SufferingOptimum suffering_optimum(const TypeDistribution& dist, const ValueFunction& v) {
    if (v.mode() != ValueMode::suffering && detect_regime(v, dist) != ValueRegime::suffering)
        throw DomainError("suffering optimum needs v' <= -1");
    auto rev = classify_reverse(dist);
    auto objective = [&](double t0) {
        if (t0 <= 0.0) return 0.0;
        auto alloc = suffering_allocation(dist, t0, rev.l_increasing, 2048);
        return revenue(alloc, v, 0.0, Orientation::suffering, false);
    };
    double top = search_top(dist);
    auto best = maximize(objective, 0.0, top, rev.l_increasing ? 512 : 256);
    // prefer serving more types when the objective is flat at the top
    if (objective(top) >= best.value - 1e-12 * std::max(1.0, std::fabs(best.value))) best = {top, objective(top)};
    double tau0 = best.x;
    auto alloc = suffering_allocation(dist, tau0, rev.l_increasing, 4096);
    Mechanism m(alloc, v, 0.0, Orientation::suffering);

    SufferingOptimum r{theta_at(dist, tau0), tau0, m};
    r.revenue = revenue(alloc, v, 0.0, Orientation::suffering, false);

    auto single = maximize(
        [&](double t0) {
            double th = theta_at(dist, t0);
            return (th * (1.0 - 0.5 * t0) + v(th)) * t0;
        },
        0.0, top);
    r.single_good_revenue = single.value;
    r.single_good_ratio = r.revenue > 0.0 ? single.value / r.revenue : 1.0;

    bool cond = true;
    auto g = analysis_grid(1024);
    if (dist.bounded()) g.push_back(1.0);
    for (double t : g) {
        double th = theta_at(dist, t);
        double val = v(th);
        if (!(val > 0.0) || -v.slope(th) * dist.reverse_hazard_at(t) > val * (1.0 + 1e-12)) {
            cond = false;
            break;
        }
    }
    r.no_exclusion_condition = cond;
    r.cs_mode = rev.rfr_decreasing ? CsMode::pooling : rev.rfr_increasing ? CsMode::separation : CsMode::undetermined;
    return r;
}

double waiting_time(const StatusAllocation& alloc, double theta) { return 1.0 - alloc(theta); }

std::vector<std::pair<double, double>> waiting_time_table(const StatusAllocation& alloc, std::size_t n) {
    std::vector<std::pair<double, double>> out;
    const auto& dist = alloc.distribution();
    for (std::size_t i = 0; i < n; ++i) {
        double th = dist.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
        out.emplace_back(th, waiting_time(alloc, th));
    }
    return out;
}

const char* to_string(CsMode m) {
    switch (m) {
        case CsMode::pooling: return "pooling";
        case CsMode::separation: return "separation";
        default: return "undetermined";
    }
}

}  // namespace posgood
