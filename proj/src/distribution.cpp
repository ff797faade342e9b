#include "posgood/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "posgood/errors.hpp"

namespace posgood {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void require(bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
}

}  // namespace

TypeDistribution TypeDistribution::uniform(double a, double b) {
    require(std::isfinite(a) && std::isfinite(b) && a >= 0.0 && b > a, "uniform(a,b) needs 0 <= a < b");
    return TypeDistribution(Uniform{a, b});
}

TypeDistribution TypeDistribution::exponential(double rate) {
    require(std::isfinite(rate) && rate > 0.0, "exp(rate) needs rate > 0");
    return TypeDistribution(Exponential{rate});
}

TypeDistribution TypeDistribution::power(double beta) {
    require(std::isfinite(beta) && beta > 0.0, "power(beta) needs beta > 0");
    return TypeDistribution(Power{beta});
}

TypeDistribution TypeDistribution::pareto(double shape, double scale) {
    require(std::isfinite(shape) && shape > 1.0, "pareto shape must be > 1");
    require(std::isfinite(scale) && scale > 0.0, "pareto scale must be > 0");
    return TypeDistribution(Pareto{shape, scale});
}

TypeDistribution TypeDistribution::empirical(std::vector<double> samples, std::vector<double> weights,
                                             std::string label) {
    if (weights.empty()) weights.assign(samples.size(), 1.0);
    require(weights.size() == samples.size(), "empirical: weight count differs from sample count");
    std::vector<std::size_t> idx(samples.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i : idx) {
        require(std::isfinite(samples[i]), "empirical: non-finite sample");
        require(std::isfinite(weights[i]) && weights[i] >= 0.0, "empirical: negative weight");
    }
    std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return samples[i] < samples[j]; });

    std::vector<double> xs, ws;
    for (std::size_t i : idx) {
        if (weights[i] == 0.0) continue;
        if (!xs.empty() && samples[i] == xs.back()) {
            ws.back() += weights[i];
        } else {
            xs.push_back(samples[i]);
            ws.push_back(weights[i]);
        }
    }
    require(xs.size() >= 2, "empirical: need at least two distinct samples");

    // segment i carries half the weight of each endpoint
    std::vector<double> c(xs.size(), 0.0);
    for (std::size_t i = 1; i < xs.size(); ++i) c[i] = c[i - 1] + 0.5 * (ws[i - 1] + ws[i]);
    double total = c.back();
    for (double& ci : c) ci /= total;
    c.back() = 1.0;

    Empirical e{std::make_shared<const std::vector<double>>(std::move(xs)),
                std::make_shared<const std::vector<double>>(std::move(c)), std::move(label)};
    require(e.x->front() >= 0.0, "empirical: types must be nonnegative");
    return TypeDistribution(std::move(e));
}

DistributionKind TypeDistribution::kind() const {
    return std::visit(overloaded{[](const Uniform&) { return DistributionKind::uniform; },
                                 [](const Exponential&) { return DistributionKind::exponential; },
                                 [](const Power&) { return DistributionKind::power; },
                                 [](const Pareto&) { return DistributionKind::pareto; },
                                 [](const Empirical&) { return DistributionKind::empirical; }},
                      params_);
}

std::string TypeDistribution::describe() const {
    return std::visit(
        overloaded{[](const Uniform& u) { return "uniform(" + fmt(u.a) + "," + fmt(u.b) + ")"; },
                   [](const Exponential& e) { return "exp(" + fmt(e.rate) + ")"; },
                   [](const Power& p) { return "power(" + fmt(p.beta) + ")"; },
                   [](const Pareto& p) { return "pareto(" + fmt(p.shape) + "," + fmt(p.scale) + ")"; },
                   [](const Empirical& e) {
                       if (!e.label.empty()) return "empirical(" + e.label + ")";
                       return "empirical(n=" + std::to_string(e.x->size()) + ")";
                   }},
        params_);
}

double TypeDistribution::support_lo() const {
    return std::visit(overloaded{[](const Uniform& u) { return u.a; },
                                 [](const Empirical& e) { return e.x->front(); },
                                 [](const auto&) { return 0.0; }},
                      params_);
}

double TypeDistribution::support_hi() const {
    return std::visit(overloaded{[](const Uniform& u) { return u.b; },
                                 [](const Power&) { return 1.0; },
                                 [](const Empirical& e) { return e.x->back(); },
                                 [](const auto&) { return kInf; }},
                      params_);
}

bool TypeDistribution::bounded() const { return std::isfinite(support_hi()); }

std::size_t TypeDistribution::segment_of_theta(const Empirical& e, double theta) const {
    const auto& x = *e.x;
    auto it = std::upper_bound(x.begin(), x.end(), theta);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    if (i == 0) return 0;
    return std::min(i - 1, x.size() - 2);
}

std::size_t TypeDistribution::segment_of_tau(const Empirical& e, double tau) const {
    const auto& c = *e.c;
    auto it = std::upper_bound(c.begin(), c.end(), tau);
    std::size_t i = static_cast<std::size_t>(it - c.begin());
    if (i == 0) return 0;
    return std::min(i - 1, c.size() - 2);
}

double TypeDistribution::cdf(double theta) const {
    if (theta <= support_lo()) return 0.0;
    if (theta >= support_hi()) return 1.0;
    return std::visit(overloaded{[&](const Uniform& u) { return (theta - u.a) / (u.b - u.a); },
                                 [&](const Exponential& e) { return -std::expm1(-e.rate * theta); },
                                 [&](const Power& p) { return std::pow(theta, p.beta); },
                                 [&](const Pareto& p) {
                                     return -std::expm1(p.shape * std::log(p.scale / (p.scale + theta)));
                                 },
                                 [&](const Empirical& e) {
                                     std::size_t i = segment_of_theta(e, theta);
                                     const auto& x = *e.x;
                                     const auto& c = *e.c;
                                     return c[i] + (c[i + 1] - c[i]) * (theta - x[i]) / (x[i + 1] - x[i]);
                                 }},
                      params_);
}

double TypeDistribution::survival(double theta) const {
    if (theta <= support_lo()) return 1.0;
    if (theta >= support_hi()) return 0.0;
    return std::visit(overloaded{[&](const Exponential& e) { return std::exp(-e.rate * theta); },
                                 [&](const Pareto& p) { return std::pow(p.scale / (p.scale + theta), p.shape); },
                                 [&](const auto&) { return 1.0 - cdf(theta); }},
                      params_);
}

double TypeDistribution::pdf(double theta) const {
    if (theta < support_lo() || theta > support_hi()) return 0.0;
    return std::visit(overloaded{[&](const Uniform& u) { return 1.0 / (u.b - u.a); },
                                 [&](const Exponential& e) { return e.rate * std::exp(-e.rate * theta); },
                                 [&](const Power& p) { return p.beta * std::pow(theta, p.beta - 1.0); },
                                 [&](const Pareto& p) {
                                     return p.shape / p.scale * std::pow(p.scale / (p.scale + theta), p.shape + 1.0);
                                 },
                                 [&](const Empirical& e) {
                                     std::size_t i = segment_of_theta(e, theta);
                                     const auto& x = *e.x;
                                     const auto& c = *e.c;
                                     return (c[i + 1] - c[i]) / (x[i + 1] - x[i]);
                                 }},
                      params_);
}

double TypeDistribution::quantile(double tau) const {
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("quantile: tau outside [0,1]");
    if (tau == 0.0) return support_lo();
    if (tau == 1.0) return support_hi();
    return std::visit(overloaded{[&](const Uniform& u) { return u.a + tau * (u.b - u.a); },
                                 [&](const Exponential& e) { return -std::log1p(-tau) / e.rate; },
                                 [&](const Power& p) { return std::pow(tau, 1.0 / p.beta); },
                                 [&](const Pareto& p) {
                                     return p.scale * std::expm1(-std::log1p(-tau) / p.shape);
                                 },
                                 [&](const Empirical& e) {
                                     std::size_t i = segment_of_tau(e, tau);
                                     const auto& x = *e.x;
                                     const auto& c = *e.c;
                                     return x[i] + (x[i + 1] - x[i]) * (tau - c[i]) / (c[i + 1] - c[i]);
                                 }},
                      params_);
}

double TypeDistribution::quantile_density(double tau) const {
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("quantile_density: tau outside [0,1]");
    return std::visit(overloaded{[&](const Uniform& u) { return u.b - u.a; },
                                 [&](const Exponential& e) { return 1.0 / (e.rate * (1.0 - tau)); },
                                 [&](const Power& p) { return std::pow(tau, 1.0 / p.beta - 1.0) / p.beta; },
                                 [&](const Pareto& p) {
                                     return p.scale / p.shape * std::pow(1.0 - tau, -1.0 / p.shape - 1.0);
                                 },
                                 [&](const Empirical& e) {
                                     std::size_t i = segment_of_tau(e, tau);
                                     const auto& x = *e.x;
                                     const auto& c = *e.c;
                                     return (x[i + 1] - x[i]) / (c[i + 1] - c[i]);
                                 }},
                      params_);
}

double TypeDistribution::inverse_hazard_at(double tau) const {
    return std::visit(overloaded{[&](const Uniform& u) { return (1.0 - tau) * (u.b - u.a); },
                                 [&](const Exponential& e) { return 1.0 / e.rate; },
                                 [&](const Pareto& p) {
                                     return p.scale / p.shape * std::pow(1.0 - tau, -1.0 / p.shape);
                                 },
                                 [&](const auto&) { return (1.0 - tau) * quantile_density(tau); }},
                      params_);
}

double TypeDistribution::reverse_hazard_at(double tau) const {
    return std::visit(overloaded{[&](const Power& p) { return std::pow(tau, 1.0 / p.beta) / p.beta; },
                                 [&](const auto&) { return tau * quantile_density(tau); }},
                      params_);
}

double TypeDistribution::integral_cdf(double a, double b) const {
    if (!(b > a)) return 0.0;
    double lo = support_lo(), hi = support_hi();
    double above = 0.0;
    if (b > hi) {
        above = b - std::max(a, hi);
        b = hi;
    }
    a = std::max(a, lo);
    if (!(b > a)) return above;
    double inside = std::visit(
        overloaded{[&](const Uniform& u) {
                       double w = u.b - u.a;
                       return ((b - u.a) * (b - u.a) - (a - u.a) * (a - u.a)) / (2.0 * w);
                   },
                   [&](const Exponential& e) {
                       return (b - a) - (std::exp(-e.rate * a) - std::exp(-e.rate * b)) / e.rate;
                   },
                   [&](const Power& p) {
                       return (std::pow(b, p.beta + 1.0) - std::pow(a, p.beta + 1.0)) / (p.beta + 1.0);
                   },
                   [&](const Pareto& p) {
                       double s = p.scale, k = p.shape, tail;
                       if (std::fabs(k - 1.0) < 1e-14) {
                           tail = s * std::log((s + b) / (s + a));
                       } else {
                           tail = s * (std::pow(s / (s + a), k - 1.0) - std::pow(s / (s + b), k - 1.0)) / (k - 1.0);
                       }
                       return (b - a) - tail;
                   },
                   [&](const Empirical& e) {
                       const auto& x = *e.x;
                       double sum = 0.0;
                       std::size_t i = segment_of_theta(e, a);
                       double left = a;
                       while (left < b) {
                           double right = std::min(b, x[i + 1]);
                           sum += 0.5 * (cdf(left) + cdf(right)) * (right - left);
                           left = right;
                           if (i + 2 >= x.size()) break;
                           ++i;
                       }
                       return sum;
                   }},
        params_);
    return inside + above;
}

double TypeDistribution::mean() const {
    return std::visit(overloaded{[](const Uniform& u) { return 0.5 * (u.a + u.b); },
                                 [](const Exponential& e) { return 1.0 / e.rate; },
                                 [](const Power& p) { return p.beta / (p.beta + 1.0); },
                                 [](const Pareto& p) { return p.shape > 1.0 ? p.scale / (p.shape - 1.0) : kInf; },
                                 [](const Empirical& e) {
                                     const auto& x = *e.x;
                                     const auto& c = *e.c;
                                     double m = 0.0;
                                     for (std::size_t i = 0; i + 1 < x.size(); ++i)
                                         m += 0.5 * (x[i] + x[i + 1]) * (c[i + 1] - c[i]);
                                     return m;
                                 }},
                      params_);
}

double TypeDistribution::partial_expectation(double a, double b) const {
    double lo = support_lo(), hi = support_hi();
    a = std::max(a, lo);
    b = std::min(b, hi);
    if (!(b > a)) return 0.0;
    if (std::isinf(b)) return mean() - partial_expectation(lo, a);
    // integration by parts: int x dF = bF(b) - aF(a) - int F
    return b * cdf(b) - a * cdf(a) - integral_cdf(a, b);
}

bool TypeDistribution::same_as(const TypeDistribution& other) const {
    if (kind() != other.kind()) return false;
    if (kind() == DistributionKind::empirical) {
        const auto& a = std::get<Empirical>(params_);
        const auto& b = std::get<Empirical>(other.params_);
        return a.x == b.x || (*a.x == *b.x && *a.c == *b.c);
    }
    return describe() == other.describe();
}

std::vector<double> TypeDistribution::quantile_knots() const {
    const auto* e = std::get_if<Empirical>(&params_);
    if (!e) return {};
    const auto& c = *e->c;
    if (c.size() < 3) return {};
    return std::vector<double>(c.begin() + 1, c.end() - 1);
}

}  // namespace posgood
