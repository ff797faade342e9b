#include "posgood/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "posgood/errors.hpp"

namespace posgood {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool better(double val, std::size_t levels, double best, std::size_t best_levels) {
    if (val == kNegInf) return false;
    if (best == kNegInf) return true;
    double eps = 1e-12 * (1.0 + std::fabs(best));
    if (val > best + eps) return true;
    if (val >= best - eps && levels < best_levels) return true;
    return false;
}

// minimal utilities over the participant range [lo, hi) given statuses,
// with U >= floor_i. false when the sweeps do not settle.
bool min_utilities(const DiscreteEconomy& e, const std::vector<double>& s, std::size_t lo, std::size_t hi,
                   double first_floor, std::vector<double>& u) {
    u.assign(e.size(), 0.0);
    if (lo >= hi) return true;
    std::vector<double> w(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) w[i - lo] = -e.values[i];
    w[0] = std::max(w[0], first_floor - e.values[lo]);
    std::size_t n = hi - lo;
    bool settled = false;
    for (std::size_t pass = 0; pass < n + 2 && !settled; ++pass) {
        settled = true;
        for (std::size_t k = 1; k < n; ++k) {
            std::size_t i = lo + k;
            double cand = w[k - 1] + (e.types[i] - e.types[i - 1]) * s[i - 1];
            if (cand > w[k] + 1e-15 * (1.0 + std::fabs(w[k]))) {
                w[k] = cand;
                settled = false;
            }
        }
        for (std::size_t k = n - 1; k-- > 0;) {
            std::size_t i = lo + k;
            double cand = w[k + 1] - (e.types[i + 1] - e.types[i]) * s[i + 1];
            if (cand > w[k] + 1e-15 * (1.0 + std::fabs(w[k]))) {
                w[k] = cand;
                settled = false;
            }
        }
    }
    if (!settled) return false;
    for (std::size_t i = lo; i < hi; ++i) u[i] = w[i - lo] + e.values[i];
    return true;
}

struct Weights {
    double alpha;
    double beta;
};

Weights objective_weights(const SearchOptions& o) {
    switch (o.objective) {
        case Objective::revenue: return {1.0, 0.0};
        case Objective::consumer_surplus: return {0.0, 1.0};
        case Objective::social: return {o.lambda, 1.0};
    }
    return {1.0, 0.0};
}

double phi_of(const SearchOptions& o, double x) { return o.phi ? (*o.phi)(x) : x; }

struct Built {
    DiscreteMechanism mech;
    double value = 0.0;
    bool ok = false;
};

// statuses, minimal utilities and payments for a contiguous participant range with level labels
Built build(const DiscreteEconomy& e, const std::vector<int>& labels, std::size_t lo, std::size_t hi, double shift,
            const SearchOptions& o, std::vector<double>& scratch) {
    Built b;
    std::size_t K = e.size();
    b.mech.status = status_from_assignment(labels, e, o.gamma);
    b.mech.participates.assign(K, 0);
    int lowest = std::numeric_limits<int>::max();
    for (std::size_t i = lo; i < hi; ++i) lowest = std::min(lowest, labels[i]);
    for (std::size_t i = 0; i < K; ++i) {
        if (labels[i] == 0) {
            b.mech.status[i] = 0.0;
            continue;
        }
        b.mech.participates[i] = 1;
        double st = phi_of(o, b.mech.status[i]);
        if (labels[i] == lowest) st -= shift;
        b.mech.status[i] = st;
    }
    double floor = 0.0;
    if (o.nonneg_prices && o.orientation == Orientation::standard && lo == 0 && hi > 0)
        floor = e.types[0] * b.mech.status[0] + e.values[0];
    if (!min_utilities(e, b.mech.status, lo, hi, floor, scratch)) return b;
    b.mech.payment.assign(K, 0.0);
    double rev = 0.0, cs = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        b.mech.payment[i] = e.types[i] * b.mech.status[i] + e.values[i] - scratch[i];
        rev += e.masses[i] * b.mech.payment[i];
        cs += e.masses[i] * scratch[i];
    }
    Weights w = objective_weights(o);
    b.value = w.alpha * rev + w.beta * cs;
    b.ok = true;
    return b;
}

double binom(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

SearchResult exhaustive(const DiscreteEconomy& e, const SearchOptions& o) {
    std::size_t K = e.size();
    std::size_t m = o.max_levels == 0 ? K : o.max_levels;
    std::vector<double> shifts = o.status_shifts.empty() ? std::vector<double>{0.0} : o.status_shifts;

    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    if (o.orientation == Orientation::standard) {
        if (o.allow_exclusion)
            for (std::size_t c = 0; c < K; ++c) ranges.emplace_back(c, K);
        else
            ranges.emplace_back(0, K);
    } else {
        if (o.allow_exclusion)
            for (std::size_t end = K; end >= 1; --end) ranges.emplace_back(0, end);
        else
            ranges.emplace_back(0, K);
    }

    double count = 0.0;
    for (auto [lo, hi] : ranges) {
        std::size_t n = hi - lo;
        for (std::size_t g = 1; g <= std::min(m, n); ++g) count += binom(n - 1, g - 1);
    }
    count *= static_cast<double>(shifts.size());
    if (count > o.enumeration_cap)
        throw SizeGuardError("exhaustive search would enumerate " + std::to_string(count) + " menus");

    SearchResult best;
    best.method = SearchMethod::exhaustive;
    best.value = kNegInf;
    best.levels = std::numeric_limits<std::size_t>::max();
    if (o.allow_exclusion) {
        best.value = 0.0;
        best.levels = 0;
        best.labels.assign(K, 0);
        best.mechanism.status.assign(K, 0.0);
        best.mechanism.payment.assign(K, 0.0);
        best.mechanism.participates.assign(K, 0);
        best.cutoff_index = o.orientation == Orientation::standard ? K : 0;
    }

    std::vector<int> labels(K, 0);
    std::vector<double> scratch;
    std::vector<std::size_t> cuts;
    for (double shift : shifts) {
        for (auto [lo, hi] : ranges) {
            std::size_t n = hi - lo;
            for (std::size_t g = 1; g <= std::min(m, n); ++g) {
                // cuts are group starts after the first, strictly increasing in (lo, hi)
                cuts.assign(g - 1, 0);
                std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t start) {
                    if (k == g - 1) {
                        std::fill(labels.begin(), labels.end(), 0);
                        int lab = 1;
                        std::size_t next = 0;
                        for (std::size_t i = lo; i < hi; ++i) {
                            if (next < cuts.size() && i == cuts[next]) {
                                ++lab;
                                ++next;
                            }
                            labels[i] = lab;
                        }
                        Built b = build(e, labels, lo, hi, shift, o, scratch);
                        if (!b.ok) return;
                        if (better(b.value, g, best.value, best.levels)) {
                            best.value = b.value;
                            best.levels = g;
                            best.labels = labels;
                            best.mechanism = std::move(b.mech);
                            best.cutoff_index = o.orientation == Orientation::standard ? lo : hi;
                            best.shift = shift;
                        }
                        return;
                    }
                    std::size_t remaining = g - 1 - k;
                    for (std::size_t c = start; c + remaining <= hi; ++c) {
                        cuts[k] = c;
                        rec(k + 1, c + 1);
                    }
                };
                rec(0, lo + 1);
            }
        }
    }
    if (best.value == kNegInf) throw Error("exhaustive search found no implementable menu");
    return best;
}

SearchResult dynamic(const DiscreteEconomy& e, const SearchOptions& o) {
    if (o.orientation != Orientation::standard)
        throw SizeGuardError("dynamic search supports the standard orientation only");
    for (double d : o.status_shifts)
        if (d != 0.0) throw SizeGuardError("dynamic search does not support status shifts");
    std::size_t K = e.size();
    Weights wt = objective_weights(o);

    std::vector<double> P(K + 1, 0.0), M(K + 1, 0.0), SW(K + 2, 0.0), SB(K + 1, 0.0), Sv(K + 1, 0.0), V(K + 1, 0.0);
    for (std::size_t i = 0; i < K; ++i) {
        P[i + 1] = P[i] + e.masses[i];
        SB[i + 1] = SB[i] + e.masses[i] * e.types[i];
    }
    for (std::size_t i = K; i-- > 0;) {
        M[i] = M[i + 1] + e.masses[i];
        Sv[i] = Sv[i + 1] + e.masses[i] * e.values[i];
    }
    // SW[j] = sum_{k=1}^{j} M_k (theta_k - theta_{k-1})
    for (std::size_t j = 1; j <= K; ++j) {
        double wj = j < K ? M[j] * (e.types[j] - e.types[j - 1]) : 0.0;
        SW[j] = SW[j - 1] + wj;
    }
    // V[c] = sum_{j=c+1}^{K-1} M_j (v_j - v_{j-1})
    for (std::size_t c = K; c-- > 0;) {
        double d = (c + 1 < K) ? M[c + 1] * (e.values[c + 1] - e.values[c]) : 0.0;
        V[c] = (c + 1 < K ? V[c + 1] : 0.0) + d;
    }

    auto sigma = [&](std::size_t a, std::size_t b) { return phi_of(o, P[a] + o.gamma * (P[b] - P[a])); };
    auto weight = [&](std::size_t a, std::size_t b) {
        double A = SW[std::min(b, K - 1)] - SW[a];
        if (b > K - 1 && a >= K - 1) A = 0.0;
        double B = SB[b] - SB[a];
        return sigma(a, b) * (wt.alpha * (B - A) + wt.beta * A);
    };
    bool special0 = o.nonneg_prices;
    auto weight0 = [&](std::size_t b) {
        double w = weight(0, b);
        if (special0) w += (wt.beta - wt.alpha) * M[0] * e.types[0] * sigma(0, b);
        return w;
    };
    auto constant = [&](std::size_t c) {
        double t = wt.alpha * (Sv[c] - V[c]) + wt.beta * V[c];
        if (special0 && c == 0) t += (wt.beta - wt.alpha) * M[0] * e.values[0];
        return t;
    };

    bool unlimited = o.max_levels == 0 || o.max_levels >= K;
    std::size_t m = unlimited ? 1 : o.max_levels;
    // g[k][a]: best over [a, K) with exactly k groups (unlimited: k = 0 holds any count)
    std::size_t layers = unlimited ? 1 : m + 1;
    std::vector<std::vector<double>> g(layers, std::vector<double>(K + 1, kNegInf));
    std::vector<std::vector<std::size_t>> nxt(layers, std::vector<std::size_t>(K + 1, K));
    std::vector<std::size_t> cnt(K + 1, 0);
    g[0][K] = 0.0;

    auto solve_from = [&](std::size_t a, bool first) {
        if (unlimited) {
            double best = kNegInf;
            std::size_t bl = std::numeric_limits<std::size_t>::max(), bb = K;
            for (std::size_t b = a + 1; b <= K; ++b) {
                double w = first ? weight0(b) : weight(a, b);
                double val = w + g[0][b];
                if (better(val, cnt[b] + 1, best, bl)) {
                    best = val;
                    bl = cnt[b] + 1;
                    bb = b;
                }
            }
            return std::make_tuple(best, bl, bb);
        }
        return std::make_tuple(0.0, std::size_t{0}, std::size_t{0});
    };

    std::vector<std::vector<double>> g0;
    std::vector<std::vector<std::size_t>> n0;
    if (unlimited) {
        for (std::size_t a = K; a-- > 0;) {
            auto [v, c, b] = solve_from(a, false);
            g[0][a] = v;
            cnt[a] = c;
            nxt[0][a] = b;
        }
    } else {
        for (std::size_t a = K; a-- > 0;) {
            for (std::size_t b = a + 1; b <= K; ++b) {
                double w = weight(a, b);
                for (std::size_t k = 1; k <= m; ++k) {
                    if (g[k - 1][b] == kNegInf) continue;
                    double val = w + g[k - 1][b];
                    if (val > g[k][a]) {
                        g[k][a] = val;
                        nxt[k][a] = b;
                    }
                }
            }
        }
    }

    // answer for a given cutoff: value, levels, and the group boundaries
    auto answer = [&](std::size_t c, std::vector<std::size_t>& bounds) -> std::pair<double, std::size_t> {
        bounds.clear();
        bool first = special0 && c == 0;
        if (unlimited) {
            std::size_t b0;
            double v;
            std::size_t levels;
            if (first) {
                auto [vv, ll, bb] = solve_from(0, true);
                v = vv;
                levels = ll;
                b0 = bb;
            } else {
                v = g[0][c];
                levels = cnt[c];
                b0 = nxt[0][c];
            }
            bounds.push_back(c);
            std::size_t a = b0;
            while (a < K) {
                bounds.push_back(a);
                a = nxt[0][a];
            }
            bounds.push_back(K);
            return {v + constant(c), levels};
        }
        double best = kNegInf;
        std::size_t bk = 0, bb = K;
        for (std::size_t k = 1; k <= m; ++k) {
            if (first) {
                for (std::size_t b = 1; b <= K; ++b) {
                    if (g[k - 1][b] == kNegInf) continue;
                    double val = weight0(b) + g[k - 1][b];
                    if (better(val, k, best, bk)) {
                        best = val;
                        bk = k;
                        bb = b;
                    }
                }
            } else if (g[k][c] != kNegInf && better(g[k][c], k, best, bk)) {
                best = g[k][c];
                bk = k;
                bb = nxt[k][c];
            }
        }
        bounds.push_back(c);
        std::size_t a = bb, k = bk - 1;
        while (a < K) {
            bounds.push_back(a);
            a = nxt[k][a];
            --k;
        }
        bounds.push_back(K);
        return {best + constant(c), bk};
    };

    SearchResult res;
    res.method = SearchMethod::dynamic;
    res.value = kNegInf;
    res.levels = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> best_bounds;
    if (o.allow_exclusion) {
        res.value = 0.0;
        res.levels = 0;
        res.cutoff_index = K;
    }
    std::vector<std::size_t> bounds;
    std::size_t last_cut = o.allow_exclusion ? K : 1;
    for (std::size_t c = 0; c < last_cut; ++c) {
        auto [v, levels] = answer(c, bounds);
        if (better(v, levels, res.value, res.levels)) {
            res.value = v;
            res.levels = levels;
            res.cutoff_index = c;
            best_bounds = bounds;
        }
    }
    res.labels.assign(K, 0);
    for (std::size_t k = 0; k + 1 < best_bounds.size(); ++k)
        for (std::size_t i = best_bounds[k]; i < best_bounds[k + 1]; ++i) res.labels[i] = static_cast<int>(k + 1);
    std::vector<double> scratch;
    std::size_t lo = res.levels == 0 ? K : res.cutoff_index;
    Built b = build(e, res.labels, lo, K, 0.0, o, scratch);
    if (!b.ok) throw Error("dynamic search produced an unimplementable menu");
    res.mechanism = std::move(b.mech);
    if (res.levels == 0) {
        res.mechanism.payment.assign(K, 0.0);
    }
    return res;
}

}  // namespace

void DiscreteEconomy::validate() const {
    std::size_t K = types.size();
    if (K == 0) throw DomainError("economy has no types");
    if (masses.size() != K || values.size() != K || slopes.size() != K)
        throw DomainError("economy columns differ in length");
    double total = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        if (!std::isfinite(types[i]) || !std::isfinite(masses[i]) || !std::isfinite(values[i]))
            throw DomainError("economy entries must be finite");
        if (masses[i] < 0.0) throw DomainError("negative mass");
        if (i > 0 && types[i] <= types[i - 1]) throw DomainError("types must be strictly increasing");
        total += masses[i];
    }
    if (std::fabs(total - 1.0) > 1e-9) throw DomainError("masses must sum to 1");
}

DiscreteEconomy discretize(const TypeDistribution& dist, const ValueFunction& v, std::size_t K) {
    if (K == 0) throw DomainError("K must be positive");
    DiscreteEconomy e;
    e.types.resize(K);
    e.masses.assign(K, 1.0 / static_cast<double>(K));
    e.values.resize(K);
    e.slopes.resize(K);
    for (std::size_t i = 0; i < K; ++i) {
        double t = dist.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(K));
        e.types[i] = t;
        e.values[i] = v(t);
        e.slopes[i] = v.slope(t);
    }
    return e;
}

std::vector<double> DiscreteMechanism::utilities(const DiscreteEconomy& e) const {
    std::vector<double> u(e.size(), 0.0);
    for (std::size_t i = 0; i < e.size(); ++i)
        if (participates[i]) u[i] = e.types[i] * status[i] - payment[i] + e.values[i];
    return u;
}

std::vector<double> status_from_assignment(const std::vector<int>& labels, const DiscreteEconomy& e, double gamma) {
    if (labels.size() != e.size()) throw DomainError("label count differs from type count");
    std::vector<int> ids(labels);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (!ids.empty() && ids.front() < 0) throw DomainError("labels must be nonnegative");
    std::vector<double> mass(ids.size(), 0.0);
    auto index = [&](int l) { return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), l) - ids.begin()); };
    for (std::size_t i = 0; i < labels.size(); ++i) mass[index(labels[i])] += e.masses[i];
    std::vector<double> below(ids.size(), 0.0);
    for (std::size_t k = 1; k < ids.size(); ++k) below[k] = below[k - 1] + mass[k - 1];
    std::vector<double> s(labels.size(), 0.0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 0) continue;
        std::size_t k = index(labels[i]);
        s[i] = below[k] + gamma * mass[k];
    }
    return s;
}

IcReport ic_check(const DiscreteMechanism& m, const DiscreteEconomy& e, double tol) {
    std::size_t K = e.size();
    if (m.status.size() != K || m.payment.size() != K || m.participates.size() != K)
        throw DomainError("mechanism size differs from economy");
    std::vector<double> u = m.utilities(e);
    IcReport r;
    r.worst_deviation = kNegInf;
    for (std::size_t i = 0; i < K; ++i) {
        double out = 0.0 - u[i];
        if (out > r.worst_deviation) {
            r.worst_deviation = out;
            r.worst_type = i;
            r.worst_report = -1;
        }
        for (std::size_t j = 0; j < K; ++j) {
            if (!m.participates[j] || j == i) continue;
            double dev = e.types[i] * m.status[j] - m.payment[j] + e.values[i] - u[i];
            if (dev > r.worst_deviation) {
                r.worst_deviation = dev;
                r.worst_type = i;
                r.worst_report = static_cast<long>(j);
            }
        }
    }
    r.ok = r.worst_deviation <= tol;
    return r;
}

DiscreteMechanism sample_mechanism(const Mechanism& m, const DiscreteEconomy& e) {
    DiscreteMechanism d;
    std::size_t K = e.size();
    d.status.assign(K, 0.0);
    d.payment.assign(K, 0.0);
    d.participates.assign(K, 0);
    for (std::size_t i = 0; i < K; ++i) {
        double t = e.types[i];
        if (!m.participates(t)) continue;
        d.participates[i] = 1;
        d.status[i] = m.status(t);
        d.payment[i] = m.payment(t);
    }
    return d;
}

double discrete_revenue(const DiscreteMechanism& m, const DiscreteEconomy& e) {
    double r = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (m.participates[i]) r += e.masses[i] * m.payment[i];
    return r;
}

double discrete_consumer_surplus(const DiscreteMechanism& m, const DiscreteEconomy& e) {
    std::vector<double> u = m.utilities(e);
    double c = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) c += e.masses[i] * u[i];
    return c;
}

SearchResult best_menu_search(const DiscreteEconomy& e, const SearchOptions& o) {
    e.validate();
    if (o.gamma < 0.0 || o.gamma > 1.0) throw DomainError("gamma must lie in [0,1]");
    bool needs_exhaustive = o.orientation != Orientation::standard ||
                            std::any_of(o.status_shifts.begin(), o.status_shifts.end(), [](double d) { return d != 0.0; });
    switch (o.method) {
        case SearchMethod::exhaustive:
            if (e.size() > 40) throw SizeGuardError("exhaustive search needs K <= 40");
            return exhaustive(e, o);
        case SearchMethod::dynamic:
            return dynamic(e, o);
        case SearchMethod::automatic:
            break;
    }
    if (needs_exhaustive) {
        if (e.size() > 40) throw SizeGuardError("exhaustive search needs K <= 40");
        return exhaustive(e, o);
    }
    return dynamic(e, o);
}

AllPayOutcome all_pay_simulation(const Mechanism& m, const DiscreteEconomy& e) {
    DiscreteMechanism d = sample_mechanism(m, e);
    std::size_t K = e.size();
    AllPayOutcome out;
    out.bids.assign(K, 0.0);
    out.mechanism_status = d.status;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < K; ++i)
        if (d.participates[i]) {
            out.bids[i] = d.payment[i];
            order.push_back(i);
        }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return out.bids[a] < out.bids[b]; });
    std::vector<int> labels(K, 0);
    int lab = 0;
    double prev = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        double b = out.bids[order[k]];
        if (k == 0 || b - prev > 1e-9 * (1.0 + std::fabs(b))) ++lab;
        prev = b;
        labels[order[k]] = lab;
    }
    std::vector<double> raw = status_from_assignment(labels, e, m.allocation().gamma());
    out.realized_status = raw;
    for (std::size_t i = 0; i < K; ++i) {
        if (!d.participates[i]) continue;
        out.revenue += e.masses[i] * out.bids[i];
        double want = m.allocation().raw(e.types[i]);
        out.max_status_error = std::max(out.max_status_error, std::fabs(raw[i] - want));
    }
    return out;
}

}  // namespace posgood
