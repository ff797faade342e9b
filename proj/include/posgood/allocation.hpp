#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "posgood/distribution.hpp"
#include "posgood/phi.hpp"

namespace posgood {

// quantile: statuses are ranks in [0,1]; signaling: statuses are expected types
enum class StatusScale { quantile, signaling };

// s = F(theta) + offset (quantile scale) or s = theta (signaling scale)
struct Separation {
    double lo, hi;
    double offset = 0.0;
};

struct Pool {
    double lo, hi;
    double level;
};

// arbitrary monotone status on an interval, e.g. statuses pushed below zero
struct Profile {
    double lo, hi;
    std::function<double(double)> status;
    std::string label;
};

using Segment = std::variant<Separation, Pool, Profile>;

double segment_lo(const Segment& s);
double segment_hi(const Segment& s);

// Interim status s(theta). Segments tile a covered interval [cutoff, upper];
// types outside it are excluded (status 0). Segments are right-continuous:
// a boundary type belongs to the segment starting at it.
class StatusAllocation {
public:
    StatusAllocation(TypeDistribution dist, std::vector<Segment> segments,
                     StatusScale scale = StatusScale::quantile, double gamma = 0.5);

    static StatusAllocation full_separation(const TypeDistribution& dist, double cutoff);
    static StatusAllocation total_pooling(const TypeDistribution& dist, double cutoff, double gamma = 0.5);
    static StatusAllocation mixture(const std::vector<std::pair<double, StatusAllocation>>& parts);

    StatusAllocation with_phi(const PhiTransform& phi) const;

    const TypeDistribution& distribution() const { return dist_; }
    StatusScale scale() const { return scale_; }
    double gamma() const { return gamma_; }
    double cutoff() const { return cutoff_; }
    double upper() const { return upper_; }
    double cutoff_quantile() const { return tau_cut_; }
    double upper_quantile() const { return tau_up_; }
    bool participates(double theta) const;
    bool is_mixture() const { return !components_.empty(); }
    const std::vector<Segment>& segments() const { return segments_; }
    const std::vector<std::pair<double, StatusAllocation>>& components() const { return components_; }
    const std::optional<PhiTransform>& phi() const { return phi_; }

    // status including phi
    double operator()(double theta) const;
    double raw(double theta) const;
    double at_quantile(double tau) const;
    double raw_at_quantile(double tau) const;

    // sorted quantile breakpoints of the piecewise structure, including 0 and 1
    std::vector<double> quantile_breakpoints() const;
    std::vector<double> breakpoints() const;

    // integral of s over [a,b] in type space
    double integral(double a, double b) const;
    // E[s] over all types
    double expectation() const;
    bool is_monotone(double tol = 1e-12) const;
    bool has_pools() const;
    // last segment is a separation of positive length
    bool separates_top() const;

    std::string describe() const;

private:
    struct Placed {
        Segment seg;
        double tau_lo, tau_hi;
    };

    std::size_t locate_theta(double theta) const;
    std::size_t locate_tau(double tau) const;
    double segment_value(const Segment& s, double theta, double tau) const;
    double apply_phi(double s) const;

    TypeDistribution dist_;
    std::vector<Segment> segments_;
    std::vector<Placed> placed_;
    std::vector<std::pair<double, StatusAllocation>> components_;
    std::vector<double> weights_;
    std::optional<PhiTransform> phi_;
    StatusScale scale_ = StatusScale::quantile;
    double gamma_ = 0.5;
    double cutoff_ = 0.0, upper_ = 0.0, tau_cut_ = 0.0, tau_up_ = 1.0;
};

struct PartitionMenu {
    // theta_0 < theta_1 < ... < theta_m; level i covers [theta_i, theta_{i+1})
    std::vector<double> breakpoints;
    std::vector<double> prices;

    std::size_t levels() const { return breakpoints.empty() ? 0 : breakpoints.size() - 1; }
    double cutoff() const { return breakpoints.front(); }
    void validate(const TypeDistribution& dist) const;
};

StatusAllocation induced_status(const PartitionMenu& menu, const TypeDistribution& dist,
                                StatusScale mode = StatusScale::quantile, double gamma = 0.5);

StatusAllocation mix(const std::vector<std::pair<double, StatusAllocation>>& parts);

}  // namespace posgood
