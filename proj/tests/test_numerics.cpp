#include <doctest.h>

#include <cmath>

#include "posgood/optimize.hpp"
#include "posgood/phi.hpp"
#include "posgood/quadrature.hpp"
#include "posgood/value.hpp"
#include "posgood/errors.hpp"

using namespace posgood;
using doctest::Approx;

TEST_CASE("gauss-legendre exact for polynomials") {
    CHECK(quad::gauss_legendre([](double x) { return std::pow(x, 9); }, 0, 1) == Approx(0.1).epsilon(1e-14));
    CHECK(quad::integrate([](double x) { return std::exp(x); }, 0, 1) == Approx(std::exp(1.0) - 1).epsilon(1e-14));
}

TEST_CASE("graded rule handles endpoint singularities") {
    double v = quad::integrate_graded([](double x) { return -std::log(x); }, 0, 1, true, false);
    CHECK(v == Approx(1.0).epsilon(1e-10));
    double w = quad::integrate_graded([](double x) { return 1.0 / std::sqrt(1 - x); }, 0, 1, false, true);
    CHECK(w == Approx(2.0).epsilon(1e-6));
}

TEST_CASE("maximize and bisect") {
    auto r = maximize([](double x) { return -(x - 0.3) * (x - 0.3); }, 0, 1);
    CHECK(r.x == Approx(0.3).epsilon(1e-9));
    double root = bisect([](double x) { return x * x - 2; }, 0, 2);
    CHECK(root == Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("phi shapes") {
    CHECK(PhiTransform::identity().shape() == PhiShape::linear);
    CHECK(PhiTransform::power(2).shape() == PhiShape::convex);
    CHECK(PhiTransform::power(0.5).shape() == PhiShape::concave);
    CHECK(PhiTransform::power(2)(0.5) == Approx(0.25));
    CHECK(PhiTransform::identity().is_identity());
    CHECK_THROWS_AS(PhiTransform([](double x) { return -x; }, [](double) { return -1.0; }, "neg"), DomainError);
}

TEST_CASE("value functions") {
    auto u = TypeDistribution::uniform(0, 1);
    CHECK(validate(ValueFunction::zero(), u).ok);
    CHECK(validate(ValueFunction::linear(0.5, 0.25), u).ok);
    CHECK(validate(ValueFunction::sqrt_shift(0.1), u).ok);
    CHECK(detect_regime(ValueFunction::suffering(2, -1), u) == ValueRegime::suffering);
    CHECK(detect_regime(ValueFunction::linear(1, -0.5), u) == ValueRegime::countervailing);
    // convex increasing violates concavity
    CHECK_FALSE(validate(ValueFunction::polynomial({0, 0, 1}), u).ok);
    CHECK(max_abs_slope(ValueFunction::linear(0, 0.7), u) == Approx(0.7));
    auto p = ValueFunction::polynomial({1, 2, -0.5});
    CHECK(p(1.0) == Approx(2.5));
    CHECK(p.slope(1.0) == Approx(1.0));
}
