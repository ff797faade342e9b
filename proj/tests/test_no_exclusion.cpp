#include <doctest.h>

#include <cmath>

#include "posgood/errors.hpp"
#include "posgood/feasibility.hpp"
#include "posgood/no_exclusion.hpp"
#include "posgood/verify.hpp"

using namespace posgood;
using doctest::Approx;

namespace {
const auto U = TypeDistribution::uniform(0, 1);
const auto Z = ValueFunction::zero();
}  // namespace

TEST_CASE("revenue without exclusion") {
    auto u = revmax_no_exclusion(U);
    CHECK(u.revenue == Approx(1.0 / 6).epsilon(1e-9));
    CHECK_FALSE(u.ironed);
    auto e = revmax_no_exclusion(TypeDistribution::exponential(1));
    // int_0^1 (1-u)(-log(1-u)) du
    CHECK(e.revenue == Approx(0.25).epsilon(1e-8));
    auto mix = TypeDistribution::empirical(mixture_samples({{{0.5, 0, 1}}, {{0.5, 2, 3}}}, 400));
    auto m = revmax_no_exclusion(mix);
    CHECK(m.ironed);
    CHECK(m.revenue > revenue(StatusAllocation::full_separation(mix, mix.support_lo()), Z, 0.0) + 1e-4);
}

TEST_CASE("two-level menus") {
    auto u = two_level_optimum(U);
    CHECK(u.r2 == Approx(0.125).epsilon(1e-9));
    CHECK(u.max_revenue == Approx(1.0 / 6).epsilon(1e-9));
    CHECK(u.ratio == Approx(0.75).epsilon(1e-6));
    CHECK(u.r2 == Approx(u.half_posted_price).epsilon(1e-10));
    auto e = two_level_optimum(TypeDistribution::exponential(1));
    CHECK(e.ratio == Approx(2 / std::exp(1.0)).epsilon(1e-6));
    CHECK(e.r2 == Approx(e.half_posted_price).epsilon(1e-10));
}

TEST_CASE("two-level power closed form for beta at least one") {
    for (double b : {1.0, 2.0, 4.0}) {
        // maxR = beta^2/((1+beta)(1+2beta)), R2 = 0.5 * beta (1+beta)^(-1-1/beta)
        double maxr = b * b / ((1 + b) * (1 + 2 * b));
        double r2 = 0.5 * b * std::pow(1 + b, -1 - 1 / b);
        auto t = two_level_optimum(TypeDistribution::power(b));
        CHECK(t.max_revenue == Approx(maxr).epsilon(1e-8));
        CHECK(t.r2 == Approx(r2).epsilon(1e-8));
    }
}

TEST_CASE("two-level power below one needs ironing") {
    // beta = 1/2: ironed maximum 17/192 (quantiles [0,1/2] pooled at level 1/4), R2 = 2/27
    auto t = two_level_optimum(TypeDistribution::power(0.5));
    CHECK(t.max_revenue == Approx(17.0 / 192).epsilon(1e-6));
    CHECK(t.r2 == Approx(2.0 / 27).epsilon(1e-8));
    CHECK(t.ratio == Approx(0.836601).epsilon(1e-5));
    CHECK(t.ratio > 0.75);
}

TEST_CASE("pooling surplus condition") {
    CHECK(pooling_cs_condition(U).holds);
    CHECK_FALSE(pooling_cs_condition(TypeDistribution::pareto(2, 1)).holds);
    auto e = mean_residual_life_condition(TypeDistribution::exponential(1));
    CHECK(e.holds);
    CHECK(e.boundary);
    CHECK(mean_residual_life_condition(U).holds);
}

TEST_CASE("uniform dominance") {
    CHECK(uniform_dominance_condition(TypeDistribution::power(2)).holds);
    auto u = uniform_dominance_condition(U);
    CHECK(u.holds);
    CHECK(u.boundary);
    CHECK_FALSE(uniform_dominance_condition(TypeDistribution::power(0.5)).holds);
    CHECK_THROWS_AS(uniform_dominance_condition(TypeDistribution::exponential(1)), DomainError);
}

TEST_CASE("separation at the top") {
    CHECK(separation_at_top_check(revmax_no_exclusion(U).mechanism));
    auto mix = TypeDistribution::empirical(mixture_samples({{{0.5, 0, 1}}, {{0.5, 2, 3}}}, 400));
    CHECK(separation_at_top_check(revmax_no_exclusion(mix).mechanism));
    Mechanism pool(StatusAllocation::total_pooling(U, 0.0), Z, 0.0);
    CHECK_FALSE(separation_at_top_check(pool));
    CHECK(utility_gain_over_pooling(StatusAllocation::full_separation(U, 0.0)) == Approx(0.0).epsilon(1e-9));
}
