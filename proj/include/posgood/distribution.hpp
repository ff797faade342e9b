#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace posgood {

enum class DistributionKind { uniform, exponential, power, pareto, empirical };

// Buyer type distribution. Quantile-space accessors are the primary interface:
// most integrals in this library are taken over tau = F(theta) in [0,1].
class TypeDistribution {
public:
    static TypeDistribution uniform(double a, double b);
    static TypeDistribution exponential(double rate);
    static TypeDistribution power(double beta);
    // shifted (Lomax) form on [0, inf): F = 1 - (scale / (scale + theta))^shape
    static TypeDistribution pareto(double shape, double scale);
    // piecewise-linear cdf through the sorted samples; duplicate samples are merged
    static TypeDistribution empirical(std::vector<double> samples, std::vector<double> weights = {},
                                      std::string label = "");

    DistributionKind kind() const;
    std::string describe() const;

    double support_lo() const;
    double support_hi() const;
    bool bounded() const;

    double cdf(double theta) const;
    double survival(double theta) const;
    double pdf(double theta) const;
    double quantile(double tau) const;
    // dQ/dtau = 1 / f(Q(tau))
    double quantile_density(double tau) const;
    // integral of F over [a,b]
    double integral_cdf(double a, double b) const;
    // integral of x dF over [a,b]
    double partial_expectation(double a, double b) const;
    double mean() const;

    // (1-F)/f and F/f in quantile coordinates
    double inverse_hazard_at(double tau) const;
    double reverse_hazard_at(double tau) const;

    // interior quantiles where q jumps (empirical knots); empty for smooth families
    std::vector<double> quantile_knots() const;

    bool same_as(const TypeDistribution& other) const;

private:
    struct Uniform { double a, b; };
    struct Exponential { double rate; };
    struct Power { double beta; };
    struct Pareto { double shape, scale; };
    struct Empirical {
        std::shared_ptr<const std::vector<double>> x;
        std::shared_ptr<const std::vector<double>> c;
        std::string label;
    };
    using Params = std::variant<Uniform, Exponential, Power, Pareto, Empirical>;

    explicit TypeDistribution(Params p) : params_(std::move(p)) {}

    std::size_t segment_of_theta(const Empirical& e, double theta) const;
    std::size_t segment_of_tau(const Empirical& e, double tau) const;

    Params params_;
};

}  // namespace posgood
