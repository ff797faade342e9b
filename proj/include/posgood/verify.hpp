#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "posgood/allocation.hpp"

namespace posgood {

// samples at the quantiles (i + 1/2)/n of a mixture of uniforms {weight, lo, hi}
std::vector<double> mixture_samples(const std::vector<std::array<double, 3>>& parts, std::size_t n);

// named distributions used by the guarantee and chain checks; includes two non-regular mixtures
std::vector<std::pair<std::string, TypeDistribution>> distribution_battery();

// steps + 1 nested partition menus above the cutoff, from total pooling to full separation
std::vector<StatusAllocation> refinement_chain(const TypeDistribution& dist, double cutoff, std::size_t steps);

enum class CheckStatus { pass, fail, skipped };

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    // positive means slack
    double margin = 0.0;
    std::string detail;
};

struct VerifyOptions {
    bool inject_fault = false;
    std::size_t oracle_types = 40;
    std::size_t ic_types = 500;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool passed() const;
};

VerifyReport run_verification(const VerifyOptions& opts);

const char* to_string(CheckStatus s);

}  // namespace posgood
