#include <doctest.h>

#include <cmath>

#include "posgood/ironing.hpp"
#include "posgood/no_exclusion.hpp"
#include "posgood/mechanisms.hpp"
#include "posgood/oracle.hpp"
#include "posgood/verify.hpp"

using namespace posgood;
using doctest::Approx;

TEST_CASE("revenue curve") {
    auto u = TypeDistribution::uniform(0, 1);
    CHECK(revenue_curve(u, 0.5) == Approx(0.25));
    CHECK(revenue_curve(u, 1.0) == 0.0);
}

TEST_CASE("convex input is its own hull") {
    std::vector<double> x, y;
    for (int i = 0; i <= 100; ++i) {
        x.push_back(i / 100.0);
        y.push_back(x.back() * x.back());
    }
    auto r = convex_minorant(x, y);
    CHECK(r.pooled_intervals.empty());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(r.hull[i] == Approx(y[i]));
}

TEST_CASE("tent becomes its chord") {
    std::vector<double> x, y;
    for (int i = 0; i <= 100; ++i) {
        x.push_back(i / 100.0);
        y.push_back(1.0 - std::fabs(x.back() - 0.5));
    }
    auto r = convex_minorant(x, y);
    REQUIRE(r.pooled_intervals.size() == 1);
    CHECK(r.pooled_intervals[0].first == Approx(0.0));
    CHECK(r.pooled_intervals[0].second == Approx(1.0));
    CHECK(r.hull[50] == Approx(0.5));
}

TEST_CASE("uniform needs no ironing") {
    auto r = iron(TypeDistribution::uniform(0, 1));
    CHECK(r.pooled_intervals.empty());
    auto s = ironed_allocation(TypeDistribution::uniform(0, 1), 0.5);
    CHECK(s(0.7) == Approx(0.7));
    CHECK(s(0.3) == 0.0);
}

TEST_CASE("bimodal mixture pools across the gap and matches the oracle") {
    auto d = TypeDistribution::empirical(mixture_samples({{{0.5, 0, 1}}, {{0.5, 2, 3}}}, 400));
    auto r = iron(d);
    REQUIRE_FALSE(r.pooled_intervals.empty());
    bool covers_gap = false;
    for (auto [a, b] : r.pooled_intervals)
        if (a < 0.5 && b > 0.5) covers_gap = true;
    CHECK(covers_gap);

    // exclusion drops the whole lower mode
    auto ex = optimal_exclusion(d, ValueFunction::zero());
    CHECK_FALSE(ex.ironed);
    CHECK(ex.cutoff == Approx(2.0).epsilon(2e-3));
    auto e = discretize(d, ValueFunction::zero(), 2000);
    auto best = best_menu_search(e, SearchOptions{});
    CHECK(std::fabs(best.value - ex.revenue) < 1e-3);

    // everyone served
    auto ne = revmax_no_exclusion(d, ValueFunction::zero());
    CHECK(ne.ironed);
    auto sep = revenue(StatusAllocation::full_separation(d, d.support_lo()), ValueFunction::zero(), 0.0);
    CHECK(ne.revenue > sep + 1e-2);
    SearchOptions served;
    served.allow_exclusion = false;
    CHECK(std::fabs(best_menu_search(e, served).value - ne.revenue) < 1e-3);
}

TEST_CASE("reverse ironing of a regular distribution is trivial") {
    auto r = iron_reverse(TypeDistribution::uniform(0, 1));
    CHECK(r.pooled_intervals.empty());
}

TEST_CASE("pools from intervals") {
    auto u = TypeDistribution::uniform(0, 1);
    auto s = allocation_from_pools(u, 0.2, 1.0, {{0.4, 0.6}});
    CHECK(s(0.3) == Approx(0.3));
    CHECK(s(0.5) == Approx(0.5));
    CHECK(s(0.45) == Approx(0.5));
    CHECK(s(0.1) == 0.0);
}
