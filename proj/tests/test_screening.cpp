#include <doctest.h>

#include "posgood/errors.hpp"
#include "posgood/screening.hpp"
#include "posgood/verify.hpp"

using namespace posgood;
using doctest::Approx;

TEST_CASE("virtual values") {
    auto u = TypeDistribution::uniform(0, 1);
    CHECK(virtual_value(u, 1.0) == Approx(1.0));
    CHECK(virtual_value(u, 0.5) == Approx(0.0).epsilon(1e-15));
    CHECK(virtual_value(TypeDistribution::exponential(1), 0.3) == Approx(-0.7));
    CHECK(reverse_virtual(u, 0.0) == Approx(0.0));
    CHECK(reverse_virtual(u, 0.5) == Approx(1.0));
    CHECK(reverse_virtual(TypeDistribution::power(2), 0.5) == Approx(0.75));
    CHECK(inverse_hazard(u, 0.25) == Approx(0.75));
}

TEST_CASE("quantile forms agree with type forms") {
    auto d = TypeDistribution::pareto(3, 1);
    for (double t : {0.1, 0.4, 0.8}) {
        double th = d.quantile(t);
        CHECK(virtual_value_at(d, t) == Approx(virtual_value(d, th)));
        CHECK(reverse_virtual_at(d, t) == Approx(reverse_virtual(d, th)));
    }
    // J_lambda = lambda theta - (lambda - 1)(1-F)/f - ... reduces to theta at lambda = 1
    auto u = TypeDistribution::uniform(0, 1);
    CHECK(social_virtual_at(u, 1.0, 0.3) == Approx(0.3));
    CHECK(social_virtual_at(u, 2.0, 1.0 / 3.0) == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("virtual value matches the slope of the revenue curve") {
    auto d = TypeDistribution::exponential(2);
    double t = 0.4, h = 1e-6;
    auto R = [&](double x) { return (1 - x) * d.quantile(x); };
    double slope = (R(t + h) - R(t - h)) / (2 * h);
    CHECK(-slope == Approx(virtual_value_at(d, t)).epsilon(1e-6));
}

TEST_CASE("classification") {
    auto r = classify(TypeDistribution::uniform(0, 1));
    CHECK(r.regular);
    CHECK(r.ifr);
    CHECK_FALSE(r.dfr);
    auto e = classify(TypeDistribution::exponential(1));
    CHECK(e.regular);
    CHECK(e.ifr);
    CHECK(e.dfr);
    auto p = classify(TypeDistribution::pareto(2, 1));
    CHECK(p.dfr);
    CHECK_FALSE(p.ifr);
    CHECK(classify(TypeDistribution::power(2)).regular);
    auto mix = TypeDistribution::empirical(mixture_samples({{{0.5, 0, 1}}, {{0.5, 2, 3}}}, 2000));
    CHECK_FALSE(classify(mix).regular);
}

TEST_CASE("power below one is not regular") {
    // J = theta (1 + 1/beta) - theta^(1-beta)/beta dips near 0 for beta < 1
    CHECK_FALSE(classify(TypeDistribution::power(0.5)).regular);
    CHECK_FALSE(classify(TypeDistribution::power(0.25)).regular);
}

TEST_CASE("reverse classification") {
    auto r = classify_reverse(TypeDistribution::uniform(0, 1));
    CHECK(r.l_increasing);
    CHECK(r.rfr_decreasing);
}

TEST_CASE("virtual root") {
    CHECK(virtual_root_quantile(TypeDistribution::uniform(0, 1)) == Approx(0.5));
    CHECK(virtual_root_quantile(TypeDistribution::uniform(2, 3)) == Approx(0.0));
}

TEST_CASE("analysis grid refines the ends") {
    auto g = analysis_grid(64);
    CHECK(g.front() <= 1e-12);
    CHECK(g.back() >= 1 - 1e-12);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}
