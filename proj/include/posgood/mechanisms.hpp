#pragma once

#include <utility>
#include <vector>

#include "posgood/allocation.hpp"
#include "posgood/screening.hpp"
#include "posgood/value.hpp"

namespace posgood {

// standard: low types excluded, IR binds at the lowest participant.
// suffering: high types excluded, IR binds at the highest participant.
enum class Orientation { standard, suffering };

class Mechanism {
public:
    Mechanism(StatusAllocation alloc, ValueFunction value, double boundary_utility,
              Orientation orientation = Orientation::standard);

    const StatusAllocation& allocation() const { return alloc_; }
    const ValueFunction& value() const { return value_; }
    const TypeDistribution& distribution() const { return alloc_.distribution(); }
    double boundary_utility() const { return u0_; }
    Orientation orientation() const { return orientation_; }
    // the marginal participant
    double cutoff() const;
    bool participates(double theta) const { return alloc_.participates(theta); }

    double status(double theta) const { return alloc_(theta); }
    // U(theta) = U(cutoff) + int_cutoff^theta (s + v') dx for participants, 0 otherwise
    double utility(double theta) const;
    double payment(double theta) const;

private:
    StatusAllocation alloc_;
    ValueFunction value_;
    double u0_;
    Orientation orientation_;
};

double revenue(const StatusAllocation& alloc, const ValueFunction& v, double u0,
               Orientation orientation = Orientation::standard, bool check_feasible = true);
double consumer_surplus(const StatusAllocation& alloc, const ValueFunction& v, double u0,
                        Orientation orientation = Orientation::standard, bool check_feasible = true);
double social_welfare(const StatusAllocation& alloc, const ValueFunction& v, double lambda, double u0,
                      Orientation orientation = Orientation::standard, bool check_feasible = true);

double revenue(const Mechanism& m);
double consumer_surplus(const Mechanism& m);
double social_welfare(const Mechanism& m, double lambda);

// the same objectives by integrating p and U directly over types
double revenue_direct(const Mechanism& m);
double consumer_surplus_direct(const Mechanism& m);

struct EvalReport {
    double revenue = 0.0;
    double consumer_surplus = 0.0;
    double lambda = 1.0;
    double social_welfare = 0.0;
    double exclusion_mass = 0.0;
    std::vector<std::pair<double, double>> utility_samples;
};

EvalReport evaluate(const Mechanism& m, double lambda = 1.0);

struct ExclusionOptimum {
    double cutoff = 0.0;
    double cutoff_quantile = 0.0;
    double revenue = 0.0;
    bool ironed = false;
    StatusAllocation allocation;
};

// the sufficient condition v(lo) >= (v'(lo) + 1) / f(lo) for serving everyone
bool no_exclusion_condition(const TypeDistribution& dist, const ValueFunction& v);

ExclusionOptimum optimal_exclusion(const TypeDistribution& dist, const ValueFunction& v);

// revenue of the best allocation with every type participating
double max_revenue_without_exclusion(const TypeDistribution& dist, const ValueFunction& v);

struct ExclusionGain {
    double with_exclusion = 0.0;
    double without_exclusion = 0.0;
    double gain = 0.0;
};

ExclusionGain exclusion_gain(const TypeDistribution& dist, const ValueFunction& v);

// U(cutoff) = 0
Mechanism payment_schedule(const StatusAllocation& alloc, const ValueFunction& v);

struct SingleGoodOptimum {
    double cutoff = 0.0;
    double price = 0.0;
    double revenue = 0.0;
    double max_revenue = 0.0;
    double ratio = 0.0;
    bool guarantee_holds = false;
};

// one status level above a cutoff, priced for the cutoff type
SingleGoodOptimum single_good_optimum(const TypeDistribution& dist, const ValueFunction& v);

Mechanism cs_max_budget_balanced(const TypeDistribution& dist, const ValueFunction& v = ValueFunction::zero());

enum class CsBranch { pooling, separation };

struct NonnegCsOptimum {
    Mechanism mechanism;
    CsBranch branch;
    // both conditions hold, so both branches give the same surplus
    bool indifferent = false;
};

NonnegCsOptimum cs_max_nonneg_price(const TypeDistribution& dist, const ValueFunction& v, double gamma = 0.5);

struct SocialOptimum {
    Mechanism mechanism;
    double cutoff = 0.0;
    double welfare = 0.0;
};

SocialOptimum social_optimum(const TypeDistribution& dist, const ValueFunction& v, double lambda, bool nonneg_prices);

}  // namespace posgood
