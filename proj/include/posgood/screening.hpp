#pragma once

#include <cstddef>
#include <vector>

#include "posgood/distribution.hpp"

namespace posgood {

double virtual_value(const TypeDistribution& dist, double theta);
double reverse_virtual(const TypeDistribution& dist, double theta);
// (1-F)/f at theta
double inverse_hazard(const TypeDistribution& dist, double theta);

// same quantities at theta = Q(tau)
double virtual_value_at(const TypeDistribution& dist, double tau);
double reverse_virtual_at(const TypeDistribution& dist, double tau);
// lambda*theta - (lambda-1)(1-F)/f
double social_virtual_at(const TypeDistribution& dist, double lambda, double tau);

// interior quantile grid, uniform plus geometric refinement toward 0 and 1
std::vector<double> analysis_grid(std::size_t n = 2048);

struct MonotoneScan {
    double worst_decrease = 0.0;
    double worst_increase = 0.0;
    double scale = 0.0;
    bool increasing(double rel_tol = 1e-9) const { return worst_decrease <= rel_tol * scale; }
    bool decreasing(double rel_tol = 1e-9) const { return worst_increase <= rel_tol * scale; }
};

// scale is the largest magnitude on the central part of the grid
MonotoneScan scan_monotone(const std::vector<double>& tau, const std::vector<double>& values);

struct Regularity {
    bool regular = false;
    bool ifr = false;
    bool dfr = false;
    bool inconclusive = false;
    double regular_violation = 0.0;
    double ifr_violation = 0.0;
    double dfr_violation = 0.0;
};

Regularity classify(const TypeDistribution& dist, std::size_t grid = 2048);

struct ReverseRegularity {
    bool l_increasing = false;
    // reverse failure rate f/F decreasing, i.e. F/f increasing
    bool rfr_decreasing = false;
    bool rfr_increasing = false;
};

ReverseRegularity classify_reverse(const TypeDistribution& dist, std::size_t grid = 2048);

// quantile where J crosses zero (0 if J >= 0 throughout, 1 if never)
double virtual_root_quantile(const TypeDistribution& dist);

}  // namespace posgood
