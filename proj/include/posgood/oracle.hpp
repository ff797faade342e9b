#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "posgood/mechanisms.hpp"
#include "posgood/phi.hpp"

namespace posgood {

struct DiscreteEconomy {
    std::vector<double> types;
    std::vector<double> masses;
    std::vector<double> values;
    std::vector<double> slopes;

    std::size_t size() const { return types.size(); }
    void validate() const;
};

// K types at quantile midpoints (i + 1/2)/K with mass 1/K each
DiscreteEconomy discretize(const TypeDistribution& dist, const ValueFunction& v, std::size_t K);

struct DiscreteMechanism {
    std::vector<double> status;
    std::vector<double> payment;
    std::vector<char> participates;

    std::vector<double> utilities(const DiscreteEconomy& e) const;
};

// label 0 = excluded; among participants a larger label is a higher level.
// status = mass on strictly lower labels (excluded included) + gamma * mass on the same label
std::vector<double> status_from_assignment(const std::vector<int>& labels, const DiscreteEconomy& e,
                                           double gamma = 0.5);

struct IcReport {
    bool ok = true;
    double worst_deviation = 0.0;
    std::size_t worst_type = 0;
    // -1 when the best deviation is opting out
    long worst_report = -1;
};

IcReport ic_check(const DiscreteMechanism& m, const DiscreteEconomy& e, double tol = 1e-9);

DiscreteMechanism sample_mechanism(const Mechanism& m, const DiscreteEconomy& e);

double discrete_revenue(const DiscreteMechanism& m, const DiscreteEconomy& e);
double discrete_consumer_surplus(const DiscreteMechanism& m, const DiscreteEconomy& e);

enum class Objective { revenue, consumer_surplus, social };
enum class SearchMethod { automatic, exhaustive, dynamic };

struct SearchOptions {
    Objective objective = Objective::revenue;
    double lambda = 1.0;
    // 0 means no limit
    std::size_t max_levels = 0;
    bool allow_exclusion = true;
    double gamma = 0.5;
    std::optional<PhiTransform> phi;
    // zero price for the lowest type when nobody is excluded
    bool nonneg_prices = false;
    Orientation orientation = Orientation::standard;
    // amounts by which the lowest participating level may be pushed down
    std::vector<double> status_shifts;
    SearchMethod method = SearchMethod::automatic;
    double enumeration_cap = 2e7;
};

struct SearchResult {
    DiscreteMechanism mechanism;
    std::vector<int> labels;
    double value = 0.0;
    std::size_t levels = 0;
    // first participant (standard) or one past the last participant (suffering)
    std::size_t cutoff_index = 0;
    double shift = 0.0;
    SearchMethod method = SearchMethod::automatic;
};

SearchResult best_menu_search(const DiscreteEconomy& e, const SearchOptions& opts);

struct AllPayOutcome {
    std::vector<double> bids;
    std::vector<double> realized_status;
    std::vector<double> mechanism_status;
    double revenue = 0.0;
    double max_status_error = 0.0;
};

// bids equal the mechanism's payments; ranking the bids (ties pooled) sets the statuses
AllPayOutcome all_pay_simulation(const Mechanism& m, const DiscreteEconomy& e);

}  // namespace posgood
