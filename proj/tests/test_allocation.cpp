#include <doctest.h>

#include <cmath>

#include "posgood/allocation.hpp"
#include "posgood/errors.hpp"
#include "posgood/feasibility.hpp"

using namespace posgood;
using doctest::Approx;

TEST_CASE("full separation with exclusion") {
    auto u = TypeDistribution::uniform(0, 1);
    auto s = StatusAllocation::full_separation(u, 0.5);
    CHECK(s(0.4) == 0.0);
    CHECK(s(0.5) == Approx(0.5));
    CHECK(s(0.8) == Approx(0.8));
    CHECK_FALSE(s.participates(0.3));
    CHECK(s.cutoff_quantile() == Approx(0.5));
    CHECK(s.integral(0.0, 1.0) == Approx(0.375));
    CHECK(s.expectation() == Approx(0.375));
    CHECK(s.is_monotone());
    CHECK(s.separates_top());
}

TEST_CASE("total pooling levels") {
    auto u = TypeDistribution::uniform(0, 1);
    CHECK(StatusAllocation::total_pooling(u, 0.0)(0.3) == Approx(0.5));
    CHECK(StatusAllocation::total_pooling(u, 0.5)(0.7) == Approx(0.75));
    CHECK(StatusAllocation::total_pooling(u, 0.0, 1.0)(0.3) == Approx(1.0));
    CHECK(StatusAllocation::total_pooling(u, 0.0).has_pools());
}

TEST_CASE("induced status of a partition menu") {
    auto u = TypeDistribution::uniform(0, 1);
    PartitionMenu m{{0.0, 0.5, 1.0}, {}};
    auto s = induced_status(m, u);
    CHECK(s(0.2) == Approx(0.25));
    CHECK(s(0.7) == Approx(0.75));
    auto g = induced_status(m, u, StatusScale::quantile, 0.0);
    CHECK(g(0.7) == Approx(0.5));
    // signaling: the level is the mean type of the interval
    auto sig = induced_status(m, u, StatusScale::signaling);
    CHECK(sig(0.7) == Approx(0.75));
    CHECK(sig(0.2) == Approx(0.25));
    PartitionMenu bad{{0.0, 0.5, 0.9}, {}};
    CHECK_THROWS_AS(induced_status(bad, u), DomainError);
    PartitionMenu backwards{{0.0, 0.6, 0.4, 1.0}, {}};
    CHECK_THROWS_AS(induced_status(backwards, u), DomainError);
}

TEST_CASE("fine menu approaches separation") {
    auto u = TypeDistribution::uniform(0, 1);
    PartitionMenu m;
    for (int i = 0; i <= 1000; ++i) m.breakpoints.push_back(i / 1000.0);
    auto s = induced_status(m, u);
    for (double t : {0.1, 0.37, 0.9}) CHECK(std::fabs(s(t) - t) <= 1e-3);
}

TEST_CASE("mixtures") {
    auto u = TypeDistribution::uniform(0, 1);
    auto m = mix({{0.5, StatusAllocation::full_separation(u, 0.0)}, {0.5, StatusAllocation::total_pooling(u, 0.0)}});
    for (double t : {0.1, 0.6, 0.95}) CHECK(m(t) == Approx(t / 2 + 0.25));
    CHECK(check_weak_majorization(m).feasible);
    CHECK_THROWS_AS(mix({{0.7, StatusAllocation::full_separation(u, 0.0)}, {0.7, StatusAllocation::total_pooling(u, 0.0)}}),
                    DomainError);
}

TEST_CASE("phi applies to statuses but not feasibility") {
    auto u = TypeDistribution::uniform(0, 1);
    auto s = StatusAllocation::full_separation(u, 0.5).with_phi(PhiTransform::power(2));
    CHECK(s(0.8) == Approx(0.64));
    CHECK(s.raw(0.8) == Approx(0.8));
    CHECK(check_weak_majorization(s).feasible);
}

TEST_CASE("segments must tile") {
    auto u = TypeDistribution::uniform(0, 1);
    std::vector<Segment> gap = {Separation{0.0, 0.4}, Separation{0.5, 1.0}};
    CHECK_THROWS_AS(StatusAllocation(u, gap), DomainError);
}
