#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "posgood/allocation.hpp"
#include "posgood/distribution.hpp"

namespace posgood {

struct SampledCurve {
    std::vector<double> tau;
    std::vector<double> values;
};

// (1-tau) Q(tau); 0 at tau = 1
double revenue_curve(const TypeDistribution& dist, double tau);

// J~(tau) = int_0^tau J(Q(u)) du on a uniform quantile grid
SampledCurve integrated_virtual(const TypeDistribution& dist, std::size_t grid_size = 4096);

struct IroningResult {
    std::vector<double> grid;
    std::vector<double> jtilde;
    std::vector<double> hull;
    std::vector<std::pair<double, double>> pooled_intervals;
    // right derivative of the hull at each grid point
    std::vector<double> ironed_j;
};

IroningResult convex_minorant(const std::vector<double>& x, const std::vector<double>& y, double rel_tol = 1e-9);

// hull of J~ restricted to [tau_lo, 1]
IroningResult iron(const TypeDistribution& dist, double tau_lo = 0.0, std::size_t grid_size = 4096);
// hull of L~(tau) = tau Q(tau) restricted to [0, tau_hi]
IroningResult iron_reverse(const TypeDistribution& dist, double tau_hi = 1.0, std::size_t grid_size = 4096);

// revenue-optimal status for participants above theta0
StatusAllocation ironed_allocation(const TypeDistribution& dist, double theta0, std::size_t grid_size = 4096,
                                   double gamma = 0.5);

// builds separation/pool segments from pooled quantile intervals on [tau_lo, tau_hi];
// statuses are shifted by offset (mass ranked below the participants)
StatusAllocation allocation_from_pools(const TypeDistribution& dist, double tau_lo, double tau_hi,
                                       const std::vector<std::pair<double, double>>& pools, double offset = 0.0,
                                       double gamma = 0.5);

}  // namespace posgood
