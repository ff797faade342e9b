#include "posgood/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "posgood/errors.hpp"
#include "posgood/quadrature.hpp"
#include "posgood/screening.hpp"

namespace posgood {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

double segment_lo(const Segment& s) {
    return std::visit([](const auto& x) { return x.lo; }, s);
}

double segment_hi(const Segment& s) {
    return std::visit([](const auto& x) { return x.hi; }, s);
}

StatusAllocation::StatusAllocation(TypeDistribution dist, std::vector<Segment> segments, StatusScale scale,
                                   double gamma)
    : dist_(std::move(dist)), segments_(std::move(segments)), scale_(scale), gamma_(gamma) {
    if (!(gamma_ >= 0.0 && gamma_ <= 1.0)) throw DomainError("gamma must lie in [0,1]");
    double lo = dist_.support_lo(), hi = dist_.support_hi();
    if (segments_.empty()) {
        cutoff_ = upper_ = hi;
        tau_cut_ = tau_up_ = 1.0;
        return;
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        double a = segment_lo(segments_[i]), b = segment_hi(segments_[i]);
        if (!(b > a)) throw DomainError("allocation segment has empty interval");
        if (a < lo - 1e-12 * (1.0 + std::fabs(lo)) || b > hi * (1.0 + 1e-12) + 1e-12)
            throw DomainError("allocation segment outside the support");
        if (i > 0) {
            double prev = segment_hi(segments_[i - 1]);
            if (std::fabs(prev - a) > 1e-12 * (1.0 + std::fabs(a)))
                throw DomainError("allocation segments must tile an interval");
        }
        if (auto* p = std::get_if<Pool>(&segments_[i]); p && !std::isfinite(p->level))
            throw DomainError("pool level not finite");
        if (auto* p = std::get_if<Profile>(&segments_[i]); p && !p->status)
            throw DomainError("profile segment without a status function");
        placed_.push_back({segments_[i], dist_.cdf(a), std::isinf(b) ? 1.0 : dist_.cdf(b)});
    }
    cutoff_ = segment_lo(segments_.front());
    upper_ = segment_hi(segments_.back());
    tau_cut_ = placed_.front().tau_lo;
    tau_up_ = placed_.back().tau_hi;
}

StatusAllocation StatusAllocation::full_separation(const TypeDistribution& dist, double cutoff) {
    cutoff = std::max(cutoff, dist.support_lo());
    if (cutoff >= dist.support_hi()) return StatusAllocation(dist, {});
    return StatusAllocation(dist, {Separation{cutoff, dist.support_hi()}});
}

StatusAllocation StatusAllocation::total_pooling(const TypeDistribution& dist, double cutoff, double gamma) {
    cutoff = std::max(cutoff, dist.support_lo());
    if (cutoff >= dist.support_hi()) return StatusAllocation(dist, {}, StatusScale::quantile, gamma);
    double f0 = dist.cdf(cutoff);
    return StatusAllocation(dist, {Pool{cutoff, dist.support_hi(), gamma + (1.0 - gamma) * f0}},
                            StatusScale::quantile, gamma);
}

StatusAllocation StatusAllocation::mixture(const std::vector<std::pair<double, StatusAllocation>>& parts) {
    if (parts.empty()) throw DomainError("mixture needs at least one component");
    double total = 0.0;
    for (const auto& [w, a] : parts) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("mixture weights must be nonnegative");
        total += w;
        if (!a.distribution().same_as(parts.front().second.distribution()))
            throw DomainError("mixture components use different distributions");
        if (a.scale() != parts.front().second.scale()) throw DomainError("mixture components use different scales");
    }
    if (std::fabs(total - 1.0) > 1e-9) throw DomainError("mixture weights must sum to 1");
    StatusAllocation out(parts.front().second.distribution(), {}, parts.front().second.scale(),
                         parts.front().second.gamma());
    out.components_ = parts;
    out.cutoff_ = std::numeric_limits<double>::infinity();
    out.upper_ = -std::numeric_limits<double>::infinity();
    for (const auto& [w, a] : parts) {
        if (w == 0.0) continue;
        out.cutoff_ = std::min(out.cutoff_, a.cutoff());
        out.upper_ = std::max(out.upper_, a.upper());
    }
    out.tau_cut_ = out.dist_.cdf(out.cutoff_);
    out.tau_up_ = std::isinf(out.upper_) ? 1.0 : out.dist_.cdf(out.upper_);
    return out;
}

StatusAllocation StatusAllocation::with_phi(const PhiTransform& phi) const {
    StatusAllocation out = *this;
    if (phi.is_identity())
        out.phi_.reset();
    else
        out.phi_ = phi;
    return out;
}

bool StatusAllocation::participates(double theta) const { return theta >= cutoff_ && theta <= upper_; }

std::size_t StatusAllocation::locate_theta(double theta) const {
    auto it = std::upper_bound(placed_.begin(), placed_.end(), theta,
                               [](double t, const Placed& p) { return t < segment_lo(p.seg); });
    return static_cast<std::size_t>(it - placed_.begin()) - 1;
}

std::size_t StatusAllocation::locate_tau(double tau) const {
    auto it = std::upper_bound(placed_.begin(), placed_.end(), tau,
                               [](double t, const Placed& p) { return t < p.tau_lo; });
    std::size_t i = static_cast<std::size_t>(it - placed_.begin());
    return i == 0 ? 0 : i - 1;
}

double StatusAllocation::segment_value(const Segment& s, double theta, double tau) const {
    return std::visit(overloaded{[&](const Separation& x) {
                                     if (scale_ == StatusScale::signaling) return theta;
                                     return tau + x.offset;
                                 },
                                 [&](const Pool& x) { return x.level; },
                                 [&](const Profile& x) { return x.status(theta); }},
                      s);
}

double StatusAllocation::apply_phi(double s) const { return phi_ ? (*phi_)(s) : s; }

double StatusAllocation::raw(double theta) const {
    if (is_mixture()) {
        double acc = 0.0;
        for (const auto& [w, a] : components_)
            if (w > 0.0) acc += w * a(theta);
        return acc;
    }
    if (placed_.empty() || !participates(theta)) return 0.0;
    const auto& p = placed_[locate_theta(theta)];
    return segment_value(p.seg, theta, dist_.cdf(theta));
}

double StatusAllocation::operator()(double theta) const {
    if (!participates(theta)) return 0.0;
    return apply_phi(raw(theta));
}

double StatusAllocation::raw_at_quantile(double tau) const {
    if (is_mixture()) {
        double acc = 0.0;
        for (const auto& [w, a] : components_)
            if (w > 0.0) acc += w * a.at_quantile(tau);
        return acc;
    }
    if (placed_.empty() || tau < tau_cut_ || tau > tau_up_) return 0.0;
    const auto& p = placed_[locate_tau(tau)];
    bool need_theta = std::holds_alternative<Profile>(p.seg) ||
                      (scale_ == StatusScale::signaling && std::holds_alternative<Separation>(p.seg));
    double theta = need_theta ? dist_.quantile(tau) : 0.0;
    return segment_value(p.seg, theta, tau);
}

double StatusAllocation::at_quantile(double tau) const {
    if (tau < tau_cut_ || tau > tau_up_) return 0.0;
    return apply_phi(raw_at_quantile(tau));
}

std::vector<double> StatusAllocation::quantile_breakpoints() const {
    std::vector<double> q{0.0, 1.0};
    if (is_mixture()) {
        for (const auto& [w, a] : components_) {
            auto sub = a.quantile_breakpoints();
            q.insert(q.end(), sub.begin(), sub.end());
        }
    } else {
        for (const auto& p : placed_) {
            q.push_back(p.tau_lo);
            q.push_back(p.tau_hi);
        }
    }
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    return q;
}

std::vector<double> StatusAllocation::breakpoints() const {
    std::vector<double> t{dist_.support_lo(), dist_.support_hi()};
    if (is_mixture()) {
        for (const auto& [w, a] : components_) {
            auto sub = a.breakpoints();
            t.insert(t.end(), sub.begin(), sub.end());
        }
    } else {
        for (const auto& s : segments_) {
            t.push_back(segment_lo(s));
            t.push_back(segment_hi(s));
        }
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

double StatusAllocation::integral(double a, double b) const {
    a = std::max(a, cutoff_);
    b = std::min(b, upper_);
    if (!(b > a)) return 0.0;
    if (std::isinf(b)) throw DomainError("status integral over an unbounded interval");
    if (is_mixture() && !phi_) {
        double acc = 0.0;
        for (const auto& [w, c] : components_)
            if (w > 0.0) acc += w * c.integral(a, b);
        return acc;
    }
    if (is_mixture()) return quad::integrate([&](double x) { return (*this)(x); }, a, b, 16);
    double acc = 0.0;
    std::size_t i = locate_theta(a);
    for (; i < placed_.size(); ++i) {
        const auto& seg = placed_[i].seg;
        double l = std::max(a, segment_lo(seg)), r = std::min(b, segment_hi(seg));
        if (l >= b) break;
        if (!(r > l)) continue;
        if (!phi_) {
            if (auto* s = std::get_if<Separation>(&seg)) {
                acc += scale_ == StatusScale::signaling ? 0.5 * (r * r - l * l)
                                                        : dist_.integral_cdf(l, r) + s->offset * (r - l);
                continue;
            }
            if (auto* p = std::get_if<Pool>(&seg)) {
                acc += p->level * (r - l);
                continue;
            }
        }
        acc += quad::integrate(
            [&](double x) { return apply_phi(segment_value(seg, x, dist_.cdf(x))); }, l, r, 8);
    }
    return acc;
}

double StatusAllocation::expectation() const {
    auto q = quantile_breakpoints();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < q.size(); ++k) {
        bool hi_edge = q[k + 1] >= 1.0 && !dist_.bounded();
        acc += quad::integrate_graded([&](double t) { return at_quantile(t); }, q[k], q[k + 1], q[k] <= 0.0,
                                      hi_edge, 2);
    }
    return acc;
}

bool StatusAllocation::is_monotone(double tol) const {
    auto check_seq = [tol](const std::vector<double>& v) {
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            double scale = std::max(1.0, std::fabs(v[i]));
            if (v[i + 1] < v[i] - tol * scale) return false;
        }
        return true;
    };
    std::vector<double> vals;
    if (is_mixture()) {
        auto g = analysis_grid(2048);
        auto q = quantile_breakpoints();
        g.insert(g.end(), q.begin(), q.end());
        std::sort(g.begin(), g.end());
        for (double t : g)
            if (t >= tau_cut_ && t < tau_up_) vals.push_back(at_quantile(t));
        return check_seq(vals);
    }
    for (const auto& p : placed_) {
        const auto& seg = p.seg;
        double l = segment_lo(seg), r = segment_hi(seg);
        if (auto* prof = std::get_if<Profile>(&seg)) {
            double rr = std::isinf(r) ? dist_.quantile(1.0 - 1e-9) : r;
            for (int i = 0; i <= 64; ++i) vals.push_back(apply_phi(prof->status(l + (rr - l) * i / 64.0)));
        } else {
            vals.push_back(apply_phi(segment_value(seg, l, p.tau_lo)));
            double rr = std::isinf(r) ? dist_.quantile(1.0 - 1e-12) : r;
            vals.push_back(apply_phi(segment_value(seg, rr, p.tau_hi)));
        }
    }
    return check_seq(vals);
}

bool StatusAllocation::has_pools() const {
    if (is_mixture()) {
        for (const auto& [w, a] : components_)
            if (w > 0.0 && a.has_pools()) return true;
        return false;
    }
    return std::any_of(segments_.begin(), segments_.end(),
                       [](const Segment& s) { return std::holds_alternative<Pool>(s); });
}

bool StatusAllocation::separates_top() const {
    if (is_mixture()) {
        for (const auto& [w, a] : components_)
            if (w > 0.0 && !a.separates_top()) return false;
        return true;
    }
    if (segments_.empty() || upper_ < dist_.support_hi()) return false;
    const auto& last = segments_.back();
    return std::holds_alternative<Separation>(last) && segment_hi(last) > segment_lo(last);
}

std::string StatusAllocation::describe() const {
    if (is_mixture()) {
        std::string out = "mixture{";
        for (std::size_t i = 0; i < components_.size(); ++i)
            out += (i ? "; " : "") + fmt(components_[i].first) + " x " + components_[i].second.describe();
        return out + "}";
    }
    std::string out;
    for (const auto& s : segments_) {
        if (!out.empty()) out += " ";
        out += std::visit(overloaded{[](const Separation& x) {
                                         std::string o = "sep[" + fmt(x.lo) + "," + fmt(x.hi) + "]";
                                         if (x.offset != 0.0) o += "+" + fmt(x.offset);
                                         return o;
                                     },
                                     [](const Pool& x) {
                                         return "pool[" + fmt(x.lo) + "," + fmt(x.hi) + "]@" + fmt(x.level);
                                     },
                                     [](const Profile& x) {
                                         return "profile[" + fmt(x.lo) + "," + fmt(x.hi) + "]" + x.label;
                                     }},
                          s);
    }
    if (phi_) out += " phi=" + phi_->label();
    return out.empty() ? "none" : out;
}

void PartitionMenu::validate(const TypeDistribution& dist) const {
    if (breakpoints.size() < 2) throw DomainError("menu needs at least one level");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i + 1] > breakpoints[i])) throw DomainError("menu breakpoints must be strictly increasing");
    if (breakpoints.front() < dist.support_lo()) throw DomainError("menu cutoff below the support");
    double hi = dist.support_hi(), last = breakpoints.back();
    bool at_top = std::isinf(hi) ? std::isinf(last) : std::fabs(last - hi) <= 1e-12 * (1.0 + hi);
    if (!at_top) throw DomainError("last menu breakpoint must be the top of the support");
    if (!prices.empty() && prices.size() != levels()) throw DomainError("menu needs one price per level");
}

StatusAllocation induced_status(const PartitionMenu& menu, const TypeDistribution& dist, StatusScale mode,
                                double gamma) {
    menu.validate(dist);
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0,1]");
    std::vector<Segment> segs;
    const auto& b = menu.breakpoints;
    double lo = dist.support_lo();
    if (mode == StatusScale::signaling && b.front() > lo) {
        // non-buyers are not excluded from status here: they form the bottom level
        double mass = dist.cdf(b.front());
        segs.push_back(Pool{lo, b.front(), dist.partial_expectation(lo, b.front()) / mass});
    }
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        double fl = dist.cdf(b[i]), fh = dist.cdf(b[i + 1]);
        double level = mode == StatusScale::quantile ? gamma * fh + (1.0 - gamma) * fl
                                                     : dist.partial_expectation(b[i], b[i + 1]) / (fh - fl);
        double top = (i + 2 == b.size()) ? dist.support_hi() : b[i + 1];
        segs.push_back(Pool{b[i], top, level});
    }
    return StatusAllocation(dist, std::move(segs), mode, gamma);
}

StatusAllocation mix(const std::vector<std::pair<double, StatusAllocation>>& parts) {
    if (parts.size() == 1) {
        if (std::fabs(parts.front().first - 1.0) > 1e-9) throw DomainError("mixture weights must sum to 1");
        return parts.front().second;
    }
    return StatusAllocation::mixture(parts);
}

}  // namespace posgood
