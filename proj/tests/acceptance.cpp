// Acceptance gate: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "posgood/errors.hpp"
#include "posgood/extensions.hpp"
#include "posgood/feasibility.hpp"
#include "posgood/ironing.hpp"
#include "posgood/mechanisms.hpp"
#include "posgood/no_exclusion.hpp"
#include "posgood/oracle.hpp"
#include "posgood/quadrature.hpp"
#include "posgood/verify.hpp"

using namespace posgood;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const std::string& id, bool ok, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string f(const char* fmt_, double a) {
    char b[128];
    std::snprintf(b, sizeof b, fmt_, a);
    return b;
}

// runs a criterion, turning unexpected exceptions into a failure line
void criterion(const std::string& id, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

const ValueFunction Z = ValueFunction::zero();

struct Built {
    std::string name;
    Mechanism mech;
};

// every mechanism the solvers construct, for the feasibility and IC properties
std::vector<Built> constructed_mechanisms() {
    std::vector<Built> out;
    for (const auto& [n, d] : distribution_battery()) {
        out.push_back({"exclusion/" + n, payment_schedule(optimal_exclusion(d, Z).allocation, Z)});
        out.push_back({"no-exclusion/" + n, revmax_no_exclusion(d, Z).mechanism});
        out.push_back({"budget/" + n, cs_max_budget_balanced(d, Z)});
        TwoLevelOptimum two = two_level_optimum(d);
        PartitionMenu menu{{d.support_lo(), two.cutoff, d.support_hi()}, {}};
        if (!(two.cutoff > d.support_lo() && two.cutoff < d.support_hi())) menu.breakpoints = {d.support_lo(), d.support_hi()};
        StatusAllocation s2 = induced_status(menu, d);
        out.push_back({"two-level/" + n, Mechanism(s2, Z, d.support_lo() * s2(d.support_lo()))});
    }
    auto u = TypeDistribution::uniform(0, 1);
    auto lin = ValueFunction::linear(0.3, 0.5);
    auto sq = ValueFunction::sqrt_shift(0.01);
    out.push_back({"exclusion/uniform/linear", payment_schedule(optimal_exclusion(u, lin).allocation, lin)});
    out.push_back({"exclusion/exp/sqrt",
                   payment_schedule(optimal_exclusion(TypeDistribution::exponential(1), sq).allocation, sq)});
    out.push_back({"cs-nonneg/uniform", cs_max_nonneg_price(u, Z).mechanism});
    out.push_back({"cs-nonneg/uniform/gamma=0.8", cs_max_nonneg_price(u, lin, 0.8).mechanism});
    out.push_back({"cs-nonneg/pareto(2,1)", cs_max_nonneg_price(TypeDistribution::pareto(2, 1), Z).mechanism});
    out.push_back({"social/uniform/2", social_optimum(u, Z, 2.0, false).mechanism});
    out.push_back({"social/exp/3", social_optimum(TypeDistribution::exponential(1), lin, 3.0, false).mechanism});
    out.push_back({"phi/uniform/x^2", phi_transformed_optimum(u, Z, PhiTransform::power(2)).mechanism});
    out.push_back({"phi/uniform/sqrt", phi_transformed_optimum(u, Z, PhiTransform::power(0.5)).mechanism});
    out.push_back({"neg-status/uniform/linear", negative_status_optimum(u, lin, 0.0).mechanism});
    out.push_back({"neg-status/uniform/sqrt", negative_status_optimum(u, sq, 0.0).mechanism});
    auto suf = ValueFunction::suffering(2.0, -1.0);
    out.push_back({"suffering/uniform", suffering_optimum(u, suf).mechanism});
    out.push_back({"suffering/power(2)", suffering_optimum(TypeDistribution::power(2), suf).mechanism});
    out.push_back({"suffering/uniform/excl", suffering_optimum(u, ValueFunction::suffering(1.2, -1.5)).mechanism});
    return out;
}

}  // namespace

int main() {
    auto suite_start = std::chrono::steady_clock::now();

    criterion("1 uniform exclusion optimum", [] {
        auto t0 = std::chrono::steady_clock::now();
        auto o = optimal_exclusion(TypeDistribution::uniform(0, 1), Z);
        double dt = seconds_since(t0);
        bool ok = std::fabs(o.cutoff - 0.5) <= 1e-6 && std::fabs(o.revenue - 5.0 / 24) <= 1e-6 && dt < 1.0;
        report("1 uniform exclusion optimum", ok,
               "cutoff " + f("%.10f", o.cutoff) + ", revenue " + f("%.10f", o.revenue) + " (5/24 = 0.2083333333), " +
                   f("%.3f s", dt));
    });

    criterion("2 single-good ratios", [] {
        auto t0 = std::chrono::steady_clock::now();
        double ru = single_good_optimum(TypeDistribution::uniform(0, 1), Z).ratio;
        double re = single_good_optimum(TypeDistribution::exponential(1), Z).ratio;
        bool ok = std::fabs(ru - 0.9238) <= 0.002 && std::fabs(re - 0.919) <= 0.002;
        std::string d = "uniform " + f("%.6f", ru) + ", exponential " + f("%.6f", re);
        for (double b : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            double r = single_good_optimum(TypeDistribution::power(b), Z).ratio;
            double closed = (1 + b) * std::pow(1 / (1 + 2 * b), 1 / (2 * b)) / (b + std::pow(1 + b, -1 - 1 / b));
            ok = ok && r > 0.914 && std::fabs(r - closed) <= 0.002;
            d += ", power(" + f("%g", b) + ") " + f("%.6f", r) + " vs " + f("%.6f", closed);
        }
        double dt = seconds_since(t0);
        ok = ok && dt < 5.0;
        report("2 single-good ratios", ok, d + ", " + f("%.3f s", dt));
    });

    criterion("3 two-level ratios", [] {
        auto u = two_level_optimum(TypeDistribution::uniform(0, 1));
        auto e = two_level_optimum(TypeDistribution::exponential(1));
        double id = std::max(std::fabs(u.r2 - u.half_posted_price), std::fabs(e.r2 - e.half_posted_price));
        bool ok = std::fabs(u.ratio - 0.75) <= 1e-4 && std::fabs(e.ratio - 0.736) <= 0.002 && id <= 1e-8;
        report("3 two-level ratios", ok,
               "uniform " + f("%.8f", u.ratio) + ", exponential " + f("%.6f", e.ratio) +
                   ", |R2 - 0.5 max p(1-F(p))| " + f("%.2e", id));
    });

    criterion("4 intrinsic quality coupling", [] {
        auto o = intrinsic_quality_optimum(TypeDistribution::uniform(0, 1), CostFunction::quadratic(1.0));
        bool ok = std::fabs(o.revenue_with_status - 7.0 / 24) <= 1e-4 && std::fabs(o.revenue_pure_intrinsic - 1.0 / 12) <= 1e-4;
        report("4 intrinsic quality coupling", ok,
               "with status " + f("%.8f", o.revenue_with_status) + " (7/24), pure intrinsic " +
                   f("%.8f", o.revenue_pure_intrinsic) + " (1/12)");
    });

    criterion("5 exclusion revenue gain", [] {
        auto u = TypeDistribution::uniform(0, 1);
        auto g = exclusion_gain(u, Z);
        auto e = discretize(u, Z, 2000);
        SearchOptions with, without;
        without.allow_exclusion = false;
        double ow = best_menu_search(e, with).value, wo = best_menu_search(e, without).value;
        double og = ow / wo - 1.0;
        bool ok = std::fabs(og - g.gain) <= 0.005;
        bool discrepancy = std::fabs(g.gain - 0.235) > 0.005;
        report("5 exclusion revenue gain", ok,
               "computed " + f("%.4f%%", 100 * g.gain) + ", oracle K=2000 " + f("%.4f%%", 100 * og) +
                   ", stated 23.5%" + (discrepancy ? " [DISCREPANCY: stated value differs from 25%]" : ""));
    });

    criterion("6 excessive waiting", [] {
        auto u = TypeDistribution::uniform(0, 1);
        double alpha = 0.5;
        auto o = negative_status_optimum(u, ValueFunction::linear(0.2, alpha), 0.0);
        double worst = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            double t = i / 1000.0;
            double want = t >= 0.5 ? 1.0 - t : 1.0 + alpha;
            worst = std::max(worst, std::fabs(waiting_time(o.mechanism.allocation(), t) - want));
        }
        report("6 excessive waiting", worst <= 1e-9, "max |t - t*| over 1001 types " + f("%.2e", worst));
    });

    std::vector<Built> mechs;
    criterion("7 constructing mechanisms", [&] { mechs = constructed_mechanisms(); });

    criterion("7a majorization of constructed allocations", [&] {
        std::size_t bad = 0;
        std::string first;
        double worst = 0.0;
        for (const auto& b : mechs) {
            auto r = check_weak_majorization(b.mech.allocation());
            worst = std::max(worst, r.worst_violation);
            if (!r.feasible) {
                ++bad;
                if (first.empty()) first = b.name;
            }
        }
        report("7a majorization of constructed allocations", bad == 0,
               std::to_string(mechs.size()) + " allocations, worst violation " + f("%.2e", worst) +
                   (bad ? ", first failure " + first : ""));
    });

    criterion("7b incentive compatibility at K=500", [&] {
        std::size_t bad = 0;
        double worst = -1.0;
        std::string first;
        for (const auto& b : mechs) {
            auto e = discretize(b.mech.distribution(), b.mech.value(), 500);
            auto r = ic_check(sample_mechanism(b.mech, e), e, 1e-7);
            worst = std::max(worst, r.worst_deviation);
            if (!r.ok) {
                ++bad;
                if (first.empty()) first = b.name + " (" + f("%.2e", r.worst_deviation) + ")";
            }
        }
        report("7b incentive compatibility at K=500", bad == 0,
               std::to_string(mechs.size()) + " mechanisms, worst gain from misreport " + f("%.2e", worst) +
                   (bad ? ", first failure " + first : ""));
    });

    criterion("7c Fan-Lorentz refinement chains", [] {
        auto u = TypeDistribution::uniform(0, 1);
        auto p = TypeDistribution::pareto(2, 1);
        auto steps = [](const std::vector<StatusAllocation>& chain, bool rev, double sign) {
            double worst = 1e300, prev = 0.0;
            for (std::size_t k = 0; k < chain.size(); ++k) {
                double v = rev ? revenue(chain[k], Z, 0.0) : consumer_surplus(chain[k], Z, 0.0);
                if (k) worst = std::min(worst, sign * (v - prev));
                prev = v;
            }
            return worst;
        };
        double a = steps(refinement_chain(u, 0.5, 20), true, 1.0);
        double b = steps(refinement_chain(u, 0.0, 20), false, -1.0);
        double c = steps(refinement_chain(p, 0.0, 20), false, 1.0);
        bool ok = a >= -1e-10 && b >= -1e-10 && c >= -1e-10;
        report("7c Fan-Lorentz refinement chains", ok,
               "smallest step: uniform revenue up " + f("%.2e", a) + ", uniform CS down " + f("%.2e", b) +
                   ", pareto(2,1) CS up " + f("%.2e", c));
    });

    criterion("7d budget-balanced surplus maximization", [] {
        double worst_mean = 0.0, worst_formula = 0.0;
        for (const auto& d : {TypeDistribution::uniform(0, 1), TypeDistribution::exponential(1),
                              TypeDistribution::pareto(3, 1), TypeDistribution::power(2)}) {
            auto m = cs_max_budget_balanced(d, Z);
            worst_mean = std::max(worst_mean, std::fabs(revenue(m)));
            worst_mean = std::max(worst_mean, std::fabs(revenue_direct(m)));
            // p = int_0^theta x dF - E[(1-F) theta]
            double c = quad::integrate_graded([&](double t) { return (1 - t) * d.quantile(t); }, 0.0, 1.0, true,
                                              !d.bounded(), 16);
            for (double t : {0.1, 0.4, 0.7, 0.95}) {
                double th = d.quantile(t);
                double want = d.partial_expectation(d.support_lo(), th) - c;
                worst_formula = std::max(worst_formula, std::fabs(m.payment(th) - want));
            }
        }
        bool ok = worst_mean < 1e-9 && worst_formula < 1e-8;
        report("7d budget-balanced surplus maximization", ok,
               "max |E[p]| " + f("%.2e", worst_mean) + ", max |p - closed form| " + f("%.2e", worst_formula));
    });

    criterion("7e half-revenue guarantee", [] {
        std::size_t n = 0, bad = 0, nonregular = 0;
        double low = 1.0;
        for (const auto& [name, d] : distribution_battery()) {
            auto s = single_good_optimum(d, Z);
            ++n;
            if (!classify(d).regular) ++nonregular;
            low = std::min(low, s.ratio);
            if (!s.guarantee_holds || s.ratio < 0.5) ++bad;
        }
        report("7e half-revenue guarantee", bad == 0 && n == 12,
               std::to_string(n) + " distributions (" + std::to_string(nonregular) + " non-regular), lowest ratio " +
                   f("%.6f", low));
    });

    criterion("7f exhaustive oracle vs analytic optima", [] {
        auto u = TypeDistribution::uniform(0, 1);
        auto e = discretize(u, Z, 40);
        SearchOptions r;
        r.method = SearchMethod::exhaustive;
        r.max_levels = 5;
        double rev = best_menu_search(e, r).value;
        SearchOptions c = r;
        c.objective = Objective::consumer_surplus;
        c.allow_exclusion = false;
        c.nonneg_prices = true;
        double cs = best_menu_search(e, c).value;
        double cs_analytic = consumer_surplus(cs_max_nonneg_price(u, Z).mechanism);
        SearchOptions w = r;
        w.objective = Objective::social;
        w.lambda = 2.0;
        double soc = best_menu_search(e, w).value;
        double soc_analytic = social_optimum(u, Z, 2.0, false).welfare;
        bool ok = std::fabs(rev - 5.0 / 24) <= 1e-2 && std::fabs(cs - cs_analytic) <= 1e-2 &&
                  std::fabs(soc - soc_analytic) <= 1e-2;
        report("7f exhaustive oracle vs analytic optima", ok,
               "K=40, up to 5 levels: revenue " + f("%.6f", rev) + " vs " + f("%.6f", 5.0 / 24) + ", CS " +
                   f("%.6f", cs) + " vs " + f("%.6f", cs_analytic) + ", welfare(2) " + f("%.6f", soc) + " vs " +
                   f("%.6f", soc_analytic));
    });

    criterion("7g suffering lowering never helps", [] {
        struct Case {
            TypeDistribution d;
            ValueFunction v;
        };
        std::vector<Case> cases = {{TypeDistribution::uniform(0, 1), ValueFunction::suffering(2.0, -1.0)},
                                   {TypeDistribution::uniform(0, 1), ValueFunction::suffering(1.2, -1.5)},
                                   {TypeDistribution::power(2), ValueFunction::suffering(2.0, -1.0)},
                                   {TypeDistribution::exponential(1), ValueFunction::suffering(4.0, -1.2)}};
        double worst = -1e300;
        for (const auto& c : cases) {
            auto e = discretize(c.d, c.v, 10);
            SearchOptions o;
            o.orientation = Orientation::suffering;
            double base = best_menu_search(e, o).value;
            o.status_shifts = {0.01, 0.05, 0.1, 0.25, 0.5};
            double lowered = best_menu_search(e, o).value;
            worst = std::max(worst, lowered - base);
        }
        report("7g suffering lowering never helps", worst <= 1e-12,
               std::to_string(cases.size()) + " economies, largest gain from lowering " + f("%.2e", worst));
    });

    double total = seconds_since(suite_start);
    report("7 suite runtime", total < 120.0, f("%.2f s", total));
    return failures == 0 ? 0 : 1;
}
