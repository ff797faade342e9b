#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "posgood/allocation.hpp"
#include "posgood/mechanisms.hpp"
#include "posgood/phi.hpp"
#include "posgood/value.hpp"

namespace posgood {

// production cost c(q) of intrinsic quality
class CostFunction {
public:
    using Fn = std::function<double(double)>;
    CostFunction(Fn c, Fn dc, std::string label);

    // k q^2 / 2
    static CostFunction quadratic(double k = 1.0);
    // k q^r with r > 1
    static CostFunction power(double k, double r);

    double operator()(double q) const { return c_(q); }
    double marginal(double q) const { return dc_(q); }
    // smallest q >= 0 with c'(q) >= y
    double marginal_inverse(double y) const;
    const std::string& label() const { return label_; }

private:
    Fn c_;
    Fn dc_;
    std::string label_;
};

class QualitySchedule {
public:
    QualitySchedule(TypeDistribution dist, CostFunction cost, double cutoff);

    double cutoff() const { return cutoff_; }
    const CostFunction& cost() const { return cost_; }
    // Q(theta) = c'^{-1}(J(theta)) above the cutoff
    double quality(double theta) const;
    double status(double theta) const;
    // theta (s + Q) - int_cutoff^theta (s + Q)
    double payment(double theta) const;

private:
    TypeDistribution dist_;
    CostFunction cost_;
    double cutoff_;
};

struct IntrinsicOptimum {
    double cutoff = 0.0;
    double revenue_with_status = 0.0;
    double revenue_pure_intrinsic = 0.0;
    double status_uplift = 0.0;
    QualitySchedule schedule;
};

IntrinsicOptimum intrinsic_quality_optimum(const TypeDistribution& dist, const CostFunction& cost);

struct PhiConditions {
    PhiShape shape = PhiShape::general;
    // J phi'(F) increasing
    bool virtual_phi_increasing = false;
    // (1-F)/f phi'(F) decreasing / increasing
    bool hazard_phi_decreasing = false;
    bool hazard_phi_increasing = false;
    // J_lambda phi'(F) increasing
    bool social_phi_increasing = false;
    double lambda = 2.0;
    Regularity base;
    // which characterizations carry over under this phi
    bool revenue_result = false;
    bool cs_pooling_result = false;
    bool cs_separation_result = false;
    bool social_result = false;
};

PhiConditions phi_condition_check(const TypeDistribution& dist, const PhiTransform& phi, double lambda = 2.0);

struct PhiOptimum {
    Mechanism mechanism;
    double cutoff = 0.0;
    double revenue = 0.0;
};

PhiOptimum phi_transformed_optimum(const TypeDistribution& dist, const ValueFunction& v, const PhiTransform& phi);

struct NegativeStatusOptimum {
    Mechanism mechanism;
    // types below this get s = -v'
    double threshold = 0.0;
    double bound = 0.0;
    double revenue = 0.0;
    double consumer_surplus = 0.0;
    double exclusion_revenue = 0.0;
    double exclusion_consumer_surplus = 0.0;
    double revenue_delta = 0.0;
    double consumer_surplus_delta = 0.0;
};

// bound <= 0 picks the default 1 + max |v'|
NegativeStatusOptimum negative_status_optimum(const TypeDistribution& dist, const ValueFunction& v,
                                              double bound = 0.0);

enum class CsMode { pooling, separation, undetermined };

struct SufferingOptimum {
    double cutoff = 0.0;
    double cutoff_quantile = 1.0;
    Mechanism mechanism;
    double revenue = 0.0;
    double single_good_revenue = 0.0;
    double single_good_ratio = 0.0;
    bool no_exclusion_condition = false;
    CsMode cs_mode = CsMode::undetermined;
};

SufferingOptimum suffering_optimum(const TypeDistribution& dist, const ValueFunction& v);

// waiting time view t = 1 - s
double waiting_time(const StatusAllocation& alloc, double theta);
std::vector<std::pair<double, double>> waiting_time_table(const StatusAllocation& alloc, std::size_t n);

const char* to_string(CsMode m);

}  // namespace posgood
