#include <doctest.h>

#include <cmath>

#include "posgood/errors.hpp"
#include "posgood/extensions.hpp"
#include "posgood/feasibility.hpp"

using namespace posgood;
using doctest::Approx;

namespace {
const auto U = TypeDistribution::uniform(0, 1);
const auto Z = ValueFunction::zero();
}  // namespace

TEST_CASE("cost functions") {
    auto c = CostFunction::quadratic(1.0);
    CHECK(c(2.0) == Approx(2.0));
    CHECK(c.marginal_inverse(0.3) == Approx(0.3).epsilon(1e-10));
    auto p = CostFunction::power(1.0, 3.0);
    CHECK(p.marginal_inverse(p.marginal(0.7)) == Approx(0.7).epsilon(1e-10));
    CHECK_THROWS_AS(CostFunction([](double q) { return q + 1; }, [](double) { return 1.0; }, "bad"), DomainError);
}

TEST_CASE("intrinsic quality with status") {
    auto o = intrinsic_quality_optimum(U, CostFunction::quadratic(1.0));
    CHECK(o.cutoff == Approx(0.5).epsilon(1e-9));
    CHECK(o.revenue_with_status == Approx(7.0 / 24).epsilon(1e-6));
    CHECK(o.revenue_pure_intrinsic == Approx(1.0 / 12).epsilon(1e-6));
    CHECK(o.schedule.quality(0.8) == Approx(0.6));
    CHECK(o.schedule.quality(0.3) == 0.0);
}

TEST_CASE("phi conditions") {
    auto id = phi_condition_check(U, PhiTransform::identity());
    CHECK(id.virtual_phi_increasing == id.base.regular);
    auto sq = phi_condition_check(U, PhiTransform::power(2));
    CHECK_FALSE(sq.hazard_phi_decreasing);
    auto rt = phi_condition_check(U, PhiTransform::power(0.5));
    CHECK(rt.virtual_phi_increasing);
    CHECK(rt.revenue_result);
}

TEST_CASE("phi optimum") {
    auto id = phi_transformed_optimum(U, Z, PhiTransform::identity());
    CHECK(id.cutoff == Approx(0.5).epsilon(1e-8));
    CHECK(id.revenue == Approx(5.0 / 24).epsilon(1e-8));
    // int_{1/2}^1 (2t-1) t^2 dt
    auto sq = phi_transformed_optimum(U, Z, PhiTransform::power(2));
    CHECK(sq.cutoff == Approx(0.5).epsilon(1e-8));
    CHECK(sq.revenue == Approx(17.0 / 96).epsilon(1e-8));
    auto rt = phi_transformed_optimum(U, Z, PhiTransform::power(0.5));
    CHECK(rt.cutoff == Approx(0.5).epsilon(1e-6));
    CHECK(rt.revenue == Approx(0.22761).epsilon(1e-4));
}

TEST_CASE("negative statuses") {
    auto lin = negative_status_optimum(U, ValueFunction::linear(0.0, 0.5), 0.0);
    CHECK(std::fabs(lin.revenue_delta) < 1e-9);
    auto cv = negative_status_optimum(U, ValueFunction::sqrt_shift(0.01), 0.0);
    CHECK(cv.revenue_delta > 1e-6);
    CHECK(cv.consumer_surplus_delta < -1e-6);
    CHECK_THROWS_AS(negative_status_optimum(U, ValueFunction::linear(0.0, 0.5), 0.2), DomainError);
}

TEST_CASE("excessive waiting") {
    auto o = negative_status_optimum(U, ValueFunction::linear(0.3, 0.5), 0.0);
    for (double t : {0.1, 0.3, 0.49}) CHECK(waiting_time(o.mechanism.allocation(), t) == Approx(1.5).epsilon(1e-12));
    for (double t : {0.5, 0.75, 0.99}) CHECK(waiting_time(o.mechanism.allocation(), t) == Approx(1 - t).epsilon(1e-12));
}

TEST_CASE("suffering mode") {
    auto o = suffering_optimum(U, ValueFunction::suffering(2.0, -1.0));
    CHECK(o.cutoff == Approx(1.0));
    CHECK(o.no_exclusion_condition);
    CHECK(o.cs_mode == CsMode::pooling);
    CHECK(check_weak_majorization(o.mechanism.allocation()).feasible);
    CHECK(o.single_good_ratio <= 1.0 + 1e-12);
    CHECK(o.single_good_ratio >= 0.5);
}
