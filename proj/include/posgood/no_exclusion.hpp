#pragma once

#include <utility>
#include <vector>

#include "posgood/mechanisms.hpp"

namespace posgood {

// Every type takes some level; the lowest level is free, so U(lo) = lo s(lo) + v(lo).

struct NoExclusionOptimum {
    Mechanism mechanism;
    double revenue = 0.0;
    bool ironed = false;
};

NoExclusionOptimum revmax_no_exclusion(const TypeDistribution& dist,
                                       const ValueFunction& v = ValueFunction::zero());

struct TwoLevelOptimum {
    double price = 0.0;
    double cutoff = 0.0;
    // revenue of the two-level menu, evaluated as a mechanism
    double r2 = 0.0;
    // 0.5 max_p p (1 - F(p)), computed independently
    double half_posted_price = 0.0;
    double max_revenue = 0.0;
    double ratio = 0.0;
    bool guarantee_holds = false;
};

TwoLevelOptimum two_level_optimum(const TypeDistribution& dist);

struct ConditionReport {
    bool holds = false;
    // largest violation, 0 when the condition holds
    double worst_violation = 0.0;
    // the condition holds with equality everywhere (within tolerance)
    bool boundary = false;
};

// int_lo^theta ((1-F)/f - E[theta]) dF >= 0 for all theta
ConditionReport pooling_cs_condition(const TypeDistribution& dist);
// equivalent form: mean residual life E[x - theta | x >= theta] <= E[theta]
ConditionReport mean_residual_life_condition(const TypeDistribution& dist);

// F(theta) * hi <= theta on the support
ConditionReport uniform_dominance_condition(const TypeDistribution& dist);

// max over types of int_lo^theta (s - 1/2): positive means some type prefers s to one level
double utility_gain_over_pooling(const StatusAllocation& s);

bool separation_at_top_check(const Mechanism& m);

}  // namespace posgood
