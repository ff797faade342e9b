#include <doctest.h>

#include <cmath>

#include "posgood/errors.hpp"
#include "posgood/extensions.hpp"
#include "posgood/io.hpp"
#include "posgood/mechanisms.hpp"
#include "posgood/no_exclusion.hpp"
#include "posgood/oracle.hpp"

using namespace posgood;
using doctest::Approx;

namespace {
const auto U = TypeDistribution::uniform(0, 1);
const auto Z = ValueFunction::zero();
}  // namespace

TEST_CASE("discretization") {
    auto e = discretize(U, Z, 2);
    CHECK(e.types[0] == Approx(0.25));
    CHECK(e.types[1] == Approx(0.75));
    CHECK(e.masses[0] == Approx(0.5));
    auto x = discretize(TypeDistribution::exponential(1), Z, 1000);
    double mean = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mean += x.masses[i] * x.types[i];
    CHECK(std::fabs(mean - 1.0) < 1e-3);
}

TEST_CASE("statuses from labels") {
    auto e = discretize(U, Z, 4);
    auto s = status_from_assignment({1, 1, 2, 2}, e);
    CHECK(s[0] == Approx(0.25));
    CHECK(s[3] == Approx(0.75));
    auto all = status_from_assignment({1, 1, 1, 1}, e);
    CHECK(all[2] == Approx(0.5));
    auto top = status_from_assignment({0, 0, 1, 1}, e);
    CHECK(top[0] == 0.0);
    CHECK(top[2] == Approx(0.75));
}

TEST_CASE("ic of sampled mechanisms") {
    auto e = discretize(U, Z, 200);
    auto m = payment_schedule(StatusAllocation::full_separation(U, 0.5), Z);
    auto d = sample_mechanism(m, e);
    CHECK(ic_check(d, e, 1e-9).ok);
    // cut the price of the top level
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e.types[i] > 0.99) d.payment[i] *= 0.9;
    auto r = ic_check(d, e, 1e-9);
    CHECK_FALSE(r.ok);
    CHECK(e.types[r.worst_type] < 0.99);
    CHECK(e.types[r.worst_type] > 0.98);

    DiscreteMechanism pool{std::vector<double>(200, 0.5), std::vector<double>(200, 0.0), std::vector<char>(200, 1)};
    CHECK(ic_check(pool, e).ok);
}

TEST_CASE("exhaustive and dynamic searches agree") {
    auto e = discretize(U, Z, 20);
    for (Objective obj : {Objective::revenue, Objective::consumer_surplus, Objective::social}) {
        for (std::size_t m : {1u, 2u, 3u}) {
            SearchOptions o;
            o.objective = obj;
            o.lambda = 2.0;
            o.max_levels = m;
            o.method = SearchMethod::exhaustive;
            auto a = best_menu_search(e, o);
            o.method = SearchMethod::dynamic;
            auto b = best_menu_search(e, o);
            CHECK(a.value == Approx(b.value).epsilon(1e-12));
            CHECK(a.levels == b.levels);
            CHECK(a.cutoff_index == b.cutoff_index);
        }
    }
}

TEST_CASE("dynamic value matches the built mechanism") {
    auto e = discretize(TypeDistribution::exponential(1), ValueFunction::sqrt_shift(0.2, 0.3), 300);
    SearchOptions o;
    o.max_levels = 5;
    auto r = best_menu_search(e, o);
    CHECK(discrete_revenue(r.mechanism, e) == Approx(r.value).epsilon(1e-10));
    CHECK(ic_check(r.mechanism, e, 1e-9).ok);
    o.objective = Objective::consumer_surplus;
    o.nonneg_prices = true;
    o.allow_exclusion = false;
    auto c = best_menu_search(e, o);
    CHECK(discrete_consumer_surplus(c.mechanism, e) == Approx(c.value).epsilon(1e-10));
    for (double p : c.mechanism.payment) CHECK(p >= -1e-12);
}

TEST_CASE("search examples") {
    auto e = discretize(U, Z, 40);
    auto r = best_menu_search(e, SearchOptions{});
    CHECK(std::fabs(r.value - 5.0 / 24) < 1e-2);
    CHECK(std::fabs(e.types[r.cutoff_index] - 0.5) < 0.05);

    SearchOptions cs;
    cs.objective = Objective::consumer_surplus;
    cs.max_levels = 1;
    cs.allow_exclusion = false;
    cs.nonneg_prices = true;
    auto c = best_menu_search(e, cs);
    CHECK(c.value == Approx(0.25).epsilon(1e-9));
    CHECK(c.levels == 1);
}

TEST_CASE("two levels approach three quarters") {
    double prev = 0;
    for (std::size_t K : {50u, 200u, 800u}) {
        auto e = discretize(U, Z, K);
        SearchOptions o;
        o.allow_exclusion = false;
        o.max_levels = 2;
        double r2 = best_menu_search(e, o).value;
        o.max_levels = 0;
        double full = best_menu_search(e, o).value;
        double ratio = r2 / full;
        if (prev > 0) CHECK(std::fabs(ratio - 0.75) <= std::fabs(prev - 0.75) + 1e-12);
        prev = ratio;
    }
    CHECK(std::fabs(prev - 0.75) < 2e-3);
}

TEST_CASE("more levels never lower revenue") {
    auto e = discretize(TypeDistribution::power(2), Z, 120);
    double prev = -1;
    for (std::size_t m = 1; m <= 8; ++m) {
        SearchOptions o;
        o.max_levels = m;
        double v = best_menu_search(e, o).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("size guard") {
    auto e = discretize(U, Z, 41);
    SearchOptions o;
    o.method = SearchMethod::exhaustive;
    CHECK_THROWS_AS(best_menu_search(e, o), SizeGuardError);
    auto small = discretize(U, Z, 40);
    o.max_levels = 0;
    CHECK_THROWS_AS(best_menu_search(small, o), SizeGuardError);
    SearchOptions s;
    s.orientation = Orientation::suffering;
    CHECK_THROWS_AS(best_menu_search(e, s), SizeGuardError);
}

TEST_CASE("suffering search") {
    auto v = ValueFunction::suffering(2.0, -1.0);
    auto e = discretize(U, v, 10);
    SearchOptions o;
    o.orientation = Orientation::suffering;
    auto r = best_menu_search(e, o);
    CHECK(ic_check(r.mechanism, e, 1e-9).ok);
    CHECK(r.cutoff_index == 10);
    o.status_shifts = {0.05, 0.1, 0.3};
    CHECK(best_menu_search(e, o).value <= r.value + 1e-12);
}

TEST_CASE("all-pay implementation") {
    auto e = discretize(U, Z, 200);
    auto m = payment_schedule(StatusAllocation::full_separation(U, 0.5), Z);
    auto a = all_pay_simulation(m, e);
    CHECK(a.max_status_error < 1e-9);
    CHECK(a.revenue == Approx(discrete_revenue(sample_mechanism(m, e), e)).epsilon(1e-12));

    auto pool = payment_schedule(StatusAllocation::total_pooling(U, 0.5), Z);
    auto b = all_pay_simulation(pool, e);
    CHECK(b.max_status_error < 1e-9);
    CHECK(b.realized_status[150] == Approx(0.75));

    auto sv = ValueFunction::suffering(2.0, -1.0);
    auto so = suffering_optimum(U, sv);
    auto es = discretize(U, sv, 200);
    auto c = all_pay_simulation(so.mechanism, es);
    CHECK(c.max_status_error < 1e-9);
}
