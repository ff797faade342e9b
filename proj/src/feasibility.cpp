#include "posgood/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "posgood/errors.hpp"
#include "posgood/quadrature.hpp"
#include "posgood/screening.hpp"

namespace posgood {

namespace {

constexpr double kBindTol = 1e-6;

std::vector<double> merged_grid(const std::vector<double>& extra) {
    auto g = analysis_grid(2048);
    g.push_back(0.0);
    g.push_back(1.0);
    g.insert(g.end(), extra.begin(), extra.end());
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

// D(u_k) = int_{u_k}^1 (ref - s) du accumulated from the top
MajorizationReport tail_test(const std::vector<double>& grid, const std::function<double(double)>& excess,
                             bool grade_top, double tol, const std::function<double(double)>& to_type) {
    std::vector<double> d(grid.size(), 0.0);
    for (std::size_t k = grid.size() - 1; k-- > 0;) {
        bool top = grade_top && k + 2 == grid.size();
        d[k] = d[k + 1] + quad::integrate_graded(excess, grid[k], grid[k + 1], false, top, 1);
    }
    MajorizationReport r;
    std::size_t worst_k = 0;
    double min_d = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (d[k] < min_d) {
            min_d = d[k];
            worst_k = k;
        }
    }
    r.worst_violation = -min_d;
    r.worst_at = to_type(grid[worst_k]);
    r.feasible = r.worst_violation <= tol;
    r.mean_gap = d.front();

    std::size_t bound = 0;
    for (std::size_t k = 0; k < d.size();) {
        if (std::fabs(d[k]) > kBindTol) {
            ++k;
            continue;
        }
        std::size_t best = k;
        std::size_t j = k;
        for (; j < d.size() && std::fabs(d[j]) <= kBindTol; ++j)
            if (std::fabs(d[j]) < std::fabs(d[best])) best = j;
        // prefer run endpoints on exact ties so the extreme types get reported
        if (std::fabs(d[j - 1]) <= std::fabs(d[best])) best = j - 1;
        if (std::fabs(d[k]) <= std::fabs(d[best])) best = k;
        r.binding_points.push_back(to_type(grid[best]));
        bound += j - k;
        k = j;
    }
    r.binding_fraction = static_cast<double>(bound) / static_cast<double>(d.size());
    return r;
}

// pooled levels under tie share gamma, moved to the level the same ranking has with gamma = 1/2
StatusAllocation tie_neutral(const StatusAllocation& s) {
    if (s.gamma() == 0.5 || s.scale() != StatusScale::quantile) return s;
    if (!s.components().empty()) {
        std::vector<std::pair<double, StatusAllocation>> parts;
        for (const auto& [w, c] : s.components()) parts.emplace_back(w, tie_neutral(c));
        return StatusAllocation::mixture(parts);
    }
    const auto& d = s.distribution();
    std::vector<Segment> segs;
    for (const auto& seg : s.segments()) {
        if (const auto* p = std::get_if<Pool>(&seg)) {
            double mass = d.cdf(p->hi) - d.cdf(p->lo);
            segs.push_back(Pool{p->lo, p->hi, p->level - (s.gamma() - 0.5) * mass});
        } else {
            segs.push_back(seg);
        }
    }
    return StatusAllocation(d, std::move(segs), s.scale(), 0.5);
}

}  // namespace

MajorizationReport check_weak_majorization(const StatusAllocation& input, double tol) {
    StatusAllocation s = tie_neutral(input);
    if (!s.is_monotone()) throw DomainError("majorization test needs a monotone status on the participants");
    const auto& dist = s.distribution();
    double tau_lo = s.cutoff_quantile(), tau_hi = s.upper_quantile();
    double zero_mass = tau_lo + (1.0 - tau_hi);
    // increasing rearrangement of max(s, 0)
    auto rearranged = [&, tau_lo, zero_mass](double u) {
        if (u < zero_mass) return 0.0;
        return std::max(0.0, s.raw_at_quantile(std::min(tau_lo + (u - zero_mass), tau_hi)));
    };
    bool signaling = s.scale() == StatusScale::signaling;
    auto excess = [&](double u) { return (signaling ? dist.quantile(u) : u) - rearranged(u); };
    std::vector<double> extra;
    for (double q : s.quantile_breakpoints()) {
        if (q >= tau_lo && q <= tau_hi) extra.push_back(zero_mass + (q - tau_lo));
    }
    extra.push_back(zero_mass);
    auto grid = merged_grid(extra);
    auto to_type = [&](double u) { return dist.quantile(std::clamp(u, 0.0, 1.0)); };
    return tail_test(grid, excess, signaling && !dist.bounded(), tol, to_type);
}

MajorizationReport check_majorization_against(const StatusAllocation& s, const StatusAllocation& reference,
                                              double tol) {
    if (!s.is_monotone() || !reference.is_monotone())
        throw DomainError("majorization test needs monotone statuses");
    if (!s.distribution().same_as(reference.distribution()))
        throw DomainError("majorization test across different distributions");
    const auto& dist = s.distribution();
    auto excess = [&](double u) { return reference.raw_at_quantile(u) - s.raw_at_quantile(u); };
    auto extra = s.quantile_breakpoints();
    auto more = reference.quantile_breakpoints();
    extra.insert(extra.end(), more.begin(), more.end());
    auto grid = merged_grid(extra);
    auto to_type = [&](double u) { return dist.quantile(u); };
    bool grade = reference.scale() == StatusScale::signaling && !dist.bounded();
    return tail_test(grid, excess, grade, tol, to_type);
}

bool check_mps(const StatusAllocation& s, double tol) {
    auto r = check_weak_majorization(s, tol);
    return r.feasible && std::fabs(r.mean_gap) <= tol;
}

}  // namespace posgood
