#include "posgood/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "posgood/errors.hpp"
#include "posgood/feasibility.hpp"
#include "posgood/mechanisms.hpp"
#include "posgood/no_exclusion.hpp"
#include "posgood/oracle.hpp"

namespace posgood {

namespace {

double van_der_corput(std::size_t k) {
    double x = 0.0, base = 0.5;
    while (k) {
        if (k & 1u) x += base;
        base *= 0.5;
        k >>= 1u;
    }
    return x;
}

std::string num(double x) {
    std::ostringstream ss;
    ss.precision(6);
    ss << x;
    return ss.str();
}

CheckResult make(std::string name, bool ok, double margin, std::string detail = {}) {
    return CheckResult{std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, margin, std::move(detail)};
}

void guarded(VerifyReport& r, const std::string& name, const std::function<CheckResult()>& f) {
    try {
        r.checks.push_back(f());
    } catch (const SizeGuardError& e) {
        r.checks.push_back(CheckResult{name, CheckStatus::skipped, 0.0, e.what()});
    } catch (const Error& e) {
        r.checks.push_back(CheckResult{name, CheckStatus::fail, 0.0, e.what()});
    }
}

// status F + 0.05 capped at 1
StatusAllocation shifted_separation(const TypeDistribution& d) {
    std::vector<Segment> segs;
    segs.push_back(Profile{d.support_lo(), d.support_hi(),
                           [d](double t) { return std::min(1.0, d.cdf(t) + 0.05); }, "F+0.05"});
    return StatusAllocation(d, std::move(segs));
}

}  // namespace

std::vector<double> mixture_samples(const std::vector<std::array<double, 3>>& parts, std::size_t n) {
    double total = 0.0;
    for (const auto& p : parts) total += p[0];
    if (parts.empty() || std::fabs(total - 1.0) > 1e-12) throw DomainError("mixture weights must sum to 1");
    std::vector<double> xs;
    xs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        double acc = 0.0;
        for (std::size_t k = 0; k < parts.size(); ++k) {
            const auto& p = parts[k];
            if (u <= acc + p[0] || k + 1 == parts.size()) {
                double w = std::clamp((u - acc) / p[0], 0.0, 1.0);
                xs.push_back(p[1] + w * (p[2] - p[1]));
                break;
            }
            acc += p[0];
        }
    }
    return xs;
}

std::vector<std::pair<std::string, TypeDistribution>> distribution_battery() {
    std::vector<std::pair<std::string, TypeDistribution>> b;
    auto add = [&](TypeDistribution d) { b.emplace_back(d.describe(), std::move(d)); };
    add(TypeDistribution::uniform(0, 1));
    add(TypeDistribution::uniform(1, 2));
    add(TypeDistribution::exponential(1));
    add(TypeDistribution::exponential(3));
    add(TypeDistribution::power(0.25));
    add(TypeDistribution::power(0.5));
    add(TypeDistribution::power(2));
    add(TypeDistribution::power(4));
    add(TypeDistribution::pareto(2, 1));
    add(TypeDistribution::pareto(3, 2));
    add(TypeDistribution::empirical(mixture_samples({{{0.5, 0, 1}}, {{0.5, 2, 3}}}, 400), {},
                                    "0.5U(0,1)+0.5U(2,3)"));
    add(TypeDistribution::empirical(mixture_samples({{{0.7, 0, 1}}, {{0.3, 3, 4}}}, 400), {},
                                    "0.7U(0,1)+0.3U(3,4)"));
    return b;
}

std::vector<StatusAllocation> refinement_chain(const TypeDistribution& dist, double cutoff, std::size_t steps) {
    if (steps < 1) throw DomainError("chain needs at least one step");
    double t0 = dist.cdf(cutoff);
    std::vector<StatusAllocation> chain;
    std::vector<double> taus;
    for (std::size_t k = 0; k < steps; ++k) {
        if (k > 0) taus.push_back(t0 + (1.0 - t0) * van_der_corput(k));
        std::vector<double> sorted = taus;
        std::sort(sorted.begin(), sorted.end());
        PartitionMenu menu;
        menu.breakpoints.push_back(cutoff);
        for (double t : sorted) menu.breakpoints.push_back(dist.quantile(t));
        menu.breakpoints.push_back(dist.support_hi());
        chain.push_back(induced_status(menu, dist));
    }
    chain.push_back(StatusAllocation::full_separation(dist, cutoff));
    return chain;
}

bool VerifyReport::passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::fail; });
}

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skipped: return "skipped";
    }
    return "?";
}

VerifyReport run_verification(const VerifyOptions& opts) {
    VerifyReport r;
    ValueFunction zero = ValueFunction::zero();
    std::vector<TypeDistribution> core = {TypeDistribution::uniform(0, 1), TypeDistribution::exponential(1),
                                          TypeDistribution::power(0.5), TypeDistribution::power(2),
                                          TypeDistribution::pareto(2, 1)};

    // feasibility of constructed allocations
    for (const auto& d : core) {
        std::string dn = d.describe();
        ExclusionOptimum ex = optimal_exclusion(d, zero);
        TwoLevelOptimum two = two_level_optimum(d);
        PartitionMenu menu{{d.support_lo(), two.cutoff, d.support_hi()}, {}};
        std::vector<std::pair<std::string, StatusAllocation>> allocs = {
            {"optimal", ex.allocation},
            {"separation", StatusAllocation::full_separation(d, d.support_lo())},
            {"pooling", StatusAllocation::total_pooling(d, d.support_lo())},
            {"two-level", induced_status(menu, d)},
        };
        for (const auto& [an, a] : allocs)
            guarded(r, "feasibility/" + dn + "/" + an, [&, an = an, a = a] {
                MajorizationReport m = check_weak_majorization(a);
                return make("feasibility/" + dn + "/" + an, m.feasible, -m.worst_violation,
                            "worst violation " + num(m.worst_violation));
            });
    }
    if (opts.inject_fault) {
        TypeDistribution u = TypeDistribution::uniform(0, 1);
        guarded(r, "feasibility/fault", [&] {
            MajorizationReport m = check_weak_majorization(shifted_separation(u));
            return make("feasibility/fault", m.feasible, -m.worst_violation,
                        "status F+0.05: worst violation " + num(m.worst_violation) + " at theta=" + num(m.worst_at));
        });
    }

    // incentive compatibility on a type grid
    for (const auto& d : core) {
        std::string dn = d.describe();
        guarded(r, "ic/" + dn, [&] {
            DiscreteEconomy e = discretize(d, zero, opts.ic_types);
            std::vector<Mechanism> ms = {payment_schedule(optimal_exclusion(d, zero).allocation, zero),
                                         cs_max_budget_balanced(d, zero), revmax_no_exclusion(d, zero).mechanism};
            double worst = -1e300;
            for (const auto& m : ms) worst = std::max(worst, ic_check(sample_mechanism(m, e), e, 1e-7).worst_deviation);
            return make("ic/" + dn, worst <= 1e-7, 1e-7 - worst, "worst gain from misreport " + num(worst));
        });
    }

    // exhaustive oracle against the dynamic program and the analytic optimum
    {
        TypeDistribution u = TypeDistribution::uniform(0, 1);
        std::string name = "oracle/uniform/K=" + std::to_string(opts.oracle_types);
        guarded(r, name, [&] {
            DiscreteEconomy e = discretize(u, zero, opts.oracle_types);
            SearchOptions so;
            so.max_levels = 4;
            so.method = SearchMethod::exhaustive;
            SearchResult ex = best_menu_search(e, so);
            so.method = SearchMethod::dynamic;
            SearchResult dp = best_menu_search(e, so);
            double gap = std::fabs(ex.value - dp.value);
            double analytic = std::fabs(ex.value - 5.0 / 24.0);
            bool ok = gap <= 1e-12 && analytic <= 1e-2;
            return make(name, ok, 1e-2 - analytic,
                        "exhaustive " + num(ex.value) + ", dynamic " + num(dp.value) + ", analytic 5/24");
        });
        guarded(r, "oracle/uniform/K=2000", [&] {
            DiscreteEconomy e = discretize(u, zero, 2000);
            ExclusionOptimum ex = optimal_exclusion(u, zero);
            double disc = discrete_revenue(sample_mechanism(payment_schedule(ex.allocation, zero), e), e);
            SearchResult best = best_menu_search(e, SearchOptions{});
            double err = std::max(std::fabs(disc - ex.revenue), std::fabs(best.value - ex.revenue));
            return make("oracle/uniform/K=2000", err <= 2e-3, 2e-3 - err,
                        "analytic " + num(ex.revenue) + ", sampled " + num(disc) + ", searched " + num(best.value));
        });
    }

    // refinement chains
    struct Chain {
        std::string name;
        TypeDistribution dist;
        bool revenue;
        bool increasing;
    };
    std::vector<Chain> chains = {{"chain/uniform/revenue", TypeDistribution::uniform(0, 1), true, true},
                                 {"chain/uniform/cs", TypeDistribution::uniform(0, 1), false, false},
                                 {"chain/pareto(2,1)/cs", TypeDistribution::pareto(2, 1), false, true}};
    for (const auto& c : chains) {
        guarded(r, c.name, [&] {
            double cutoff = c.revenue ? optimal_exclusion(c.dist, zero).cutoff : c.dist.support_lo();
            auto allocs = refinement_chain(c.dist, cutoff, 20);
            double worst = 1e300, prev = 0.0;
            for (std::size_t k = 0; k < allocs.size(); ++k) {
                double val = c.revenue ? revenue(allocs[k], zero, 0.0) : consumer_surplus(allocs[k], zero, 0.0);
                if (k > 0) worst = std::min(worst, c.increasing ? val - prev : prev - val);
                prev = val;
            }
            return make(c.name, worst >= -1e-9, worst, "smallest step " + num(worst));
        });
    }

    // budget balance
    for (const auto& d : {TypeDistribution::uniform(0, 1), TypeDistribution::exponential(1)}) {
        std::string name = "budget/" + d.describe();
        guarded(r, name, [&] {
            double ep = revenue(cs_max_budget_balanced(d, zero));
            return make(name, std::fabs(ep) < 1e-9, 1e-9 - std::fabs(ep), "E[p] = " + num(ep));
        });
    }

    // half-revenue guarantee
    for (const auto& [dn, d] : distribution_battery()) {
        std::string name = "guarantee/" + dn;
        guarded(r, name, [&, d = d] {
            SingleGoodOptimum sg = single_good_optimum(d, zero);
            return make(name, sg.guarantee_holds, sg.ratio - 0.5, "ratio " + num(sg.ratio));
        });
    }

    // lowering statuses in the suffering mode
    guarded(r, "suffering/lowering", [&] {
        TypeDistribution u = TypeDistribution::uniform(0, 1);
        DiscreteEconomy e = discretize(u, ValueFunction::suffering(2.0, -1.0), 8);
        SearchOptions so;
        so.orientation = Orientation::suffering;
        so.max_levels = 8;
        double base = best_menu_search(e, so).value;
        so.status_shifts = {0.02, 0.05, 0.1, 0.25};
        double lowered = best_menu_search(e, so).value;
        return make("suffering/lowering", lowered <= base + 1e-12, base - lowered,
                    "best without lowering " + num(base) + ", with " + num(lowered));
    });
    return r;
}

}  // namespace posgood
