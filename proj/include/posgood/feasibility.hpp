#pragma once

#include <vector>

#include "posgood/allocation.hpp"

namespace posgood {

struct MajorizationReport {
    bool feasible = true;
    double worst_violation = 0.0;
    // type where the violation is largest
    double worst_at = 0.0;
    // types where the tail inequality holds with equality (one per binding run)
    std::vector<double> binding_points;
    double binding_fraction = 0.0;
    // E[reference] - E[s]
    double mean_gap = 0.0;
};

// Upper-tail test int_x s dF <= int_x F dF on the analysis grid plus the
// allocation's breakpoints. Statuses below zero are treated as zero, and the
// high-excluded mass of a suffering-mode allocation is ranked at the bottom.
// Signaling-scale statuses are compared with the identity theta. With a tie
// share gamma other than 1/2, pooled levels are first moved to their gamma = 1/2 level.
MajorizationReport check_weak_majorization(const StatusAllocation& s, double tol = 1e-9);

// same test with an arbitrary monotone reference in place of F
MajorizationReport check_majorization_against(const StatusAllocation& s, const StatusAllocation& reference,
                                              double tol = 1e-9);

bool check_mps(const StatusAllocation& s, double tol = 1e-9);

}  // namespace posgood
