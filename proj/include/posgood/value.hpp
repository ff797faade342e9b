#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "posgood/distribution.hpp"

namespace posgood {

enum class ValueMode { standard, suffering };
enum class ValueRegime { standard, suffering, countervailing, invalid };

// intrinsic value v(theta) of holding the good, with slope v'(theta)
class ValueFunction {
public:
    using Fn = std::function<double(double)>;

    ValueFunction(Fn v, Fn dv, ValueMode mode, std::string label, bool affine = false);

    static ValueFunction zero();
    static ValueFunction constant(double c);
    static ValueFunction linear(double v0, double slope);
    // c[0] + c[1] theta + c[2] theta^2 + ...
    static ValueFunction polynomial(std::vector<double> coeffs);
    // scale * sqrt(theta + shift)
    static ValueFunction sqrt_shift(double shift, double scale = 1.0);
    // v0 + slope * theta with slope <= -1
    static ValueFunction suffering(double v0, double slope);

    double operator()(double theta) const { return v_(theta); }
    double slope(double theta) const { return dv_(theta); }
    ValueMode mode() const { return mode_; }
    const std::string& label() const { return label_; }
    bool affine() const { return affine_; }

private:
    Fn v_;
    Fn dv_;
    ValueMode mode_;
    std::string label_;
    bool affine_;
};

struct ValueCheck {
    bool ok = true;
    ValueRegime regime = ValueRegime::standard;
    double worst = 0.0;
    std::string reason;
};

// checks the sign and curvature assumptions of the declared mode on a type grid
ValueCheck validate(const ValueFunction& v, const TypeDistribution& dist);
ValueRegime detect_regime(const ValueFunction& v, const TypeDistribution& dist);
double max_abs_slope(const ValueFunction& v, const TypeDistribution& dist);

}  // namespace posgood
