#pragma once

#include <functional>
#include <string>

namespace posgood {

enum class PhiShape { linear, convex, concave, general };

// strictly increasing transform of status, applied pointwise to participants
class PhiTransform {
public:
    using Fn = std::function<double(double)>;

    PhiTransform(Fn phi, Fn dphi, std::string label);

    static PhiTransform identity();
    static PhiTransform power(double r);

    double operator()(double x) const { return phi_(x); }
    double derivative(double x) const { return dphi_(x); }
    PhiShape shape() const { return shape_; }
    const std::string& label() const { return label_; }
    bool is_identity() const { return identity_; }

private:
    Fn phi_;
    Fn dphi_;
    std::string label_;
    PhiShape shape_ = PhiShape::general;
    bool identity_ = false;
};

const char* to_string(PhiShape s);

}  // namespace posgood
