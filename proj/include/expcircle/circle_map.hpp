#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace expcircle {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Reduces x into [0, 1).
inline double reduce_mod1(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

/// Standard metric on the circle, d(x,y) = min(|x-y|, 1-|x-y|) <= 1/2.
inline double circle_distance(double x, double y) {
    double d = std::abs(reduce_mod1(x) - reduce_mod1(y));
    return std::min(d, 1.0 - d);
}

/// Signed displacement from x to y along the shorter arc, in [-1/2, 1/2).
inline double circle_displacement(double x, double y) {
    double d = reduce_mod1(y - x);
    return d >= 0.5 ? d - 1.0 : d;
}

/// A point of S^1 = [0,1) with endpoints identified.
class CirclePoint {
public:
    constexpr CirclePoint() = default;
    explicit CirclePoint(double x) : value_(reduce_mod1(x)) {}

    double value() const { return value_; }
    friend bool operator==(CirclePoint, CirclePoint) = default;

private:
    double value_ = 0.0;
};

inline double distance(CirclePoint x, CirclePoint y) { return circle_distance(x.value(), y.value()); }

enum class MapFamily { linear, perturbed, custom };

/// Certified global data of an expanding map. `d1_sup` is an upper bound on
/// sup T' (exact for the built-in families).
struct MapCertificate {
    double lambda = 0.0;
    int winding = 0;
    double d2_sup = 0.0;
    double d1_sup = 0.0;
};

/// Caller-supplied description of a custom map. `lift` is the unreduced
/// lift, satisfying lift(x + 1) = lift(x) + winding.
struct CustomMapSpec {
    std::function<double(double)> lift;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
    double lambda = 0.0;
    int winding = 0;
    double d2_sup = 0.0;
    std::string label = "custom";
};

/// Smooth orientation-preserving expanding circle map with T' >= lambda > 1.
/// Immutable after construction; every member is safe to call concurrently.
class ExpandingMap {
public:
    /// Number of uniform points on which derivative bounds are audited.
    static constexpr std::size_t kAuditPoints = std::size_t{1} << 16;

    /// T(x) = w x mod 1.
    static ExpandingMap linear(int w);
    /// T(x) = w x + eps sin(2 pi x) mod 1; requires 2 pi |eps| < w - 1.
    static ExpandingMap perturbed(int w, double eps);
    /// User-supplied map; the asserted lambda, winding and d2_sup are audited.
    static ExpandingMap custom(CustomMapSpec spec);

    MapFamily family() const { return family_; }
    int winding() const { return cert_.winding; }
    double lambda() const { return cert_.lambda; }
    double d2_sup() const { return cert_.d2_sup; }
    double d1_sup() const { return cert_.d1_sup; }
    double eps() const { return eps_; }
    const MapCertificate& certificate() const { return cert_; }

    /// Unreduced lift of T.
    double lift(double x) const {
        switch (family_) {
        case MapFamily::linear: return w_ * x;
        case MapFamily::perturbed: return w_ * x + eps_ * std::sin(kTwoPi * x);
        case MapFamily::custom: break;
        }
        return custom_->lift(x);
    }

    double derivative(double x) const {
        switch (family_) {
        case MapFamily::linear: return w_;
        case MapFamily::perturbed: return w_ + (kTwoPi * eps_) * std::cos(kTwoPi * x);
        case MapFamily::custom: break;
        }
        return custom_->d1(x);
    }

    double second_derivative(double x) const {
        switch (family_) {
        case MapFamily::linear: return 0.0;
        case MapFamily::perturbed: return -(kTwoPi * kTwoPi * eps_) * std::sin(kTwoPi * x);
        case MapFamily::custom: break;
        }
        return custom_->d2(x);
    }

    CirclePoint evaluate(CirclePoint x) const { return CirclePoint(lift(x.value())); }

    /// Branch anchors 0 = b_0 < b_1 < ... < b_w = 1 with lift(b_i) = lift(0) + i.
    /// Branch i maps [b_i, b_{i+1}) onto the circle.
    std::span<const double> branch_anchors() const { return anchors_; }

    /// Human-readable identifier, e.g. "perturbed{2,0.05}".
    std::string describe() const;

private:
    ExpandingMap() = default;
    void audit_and_anchor(bool audit_d2);

    MapFamily family_ = MapFamily::linear;
    double w_ = 0.0;
    double eps_ = 0.0;
    std::shared_ptr<const CustomMapSpec> custom_;
    MapCertificate cert_;
    std::vector<double> anchors_;
};

inline CirclePoint evaluate(const ExpandingMap& map, CirclePoint x) { return map.evaluate(x); }
inline double derivative(const ExpandingMap& map, CirclePoint x) { return map.derivative(x.value()); }
inline double second_derivative(const ExpandingMap& map, CirclePoint x) {
    return map.second_derivative(x.value());
}

/// Returns the certified {lambda, winding, d2_sup, d1_sup} of a constructed map.
/// Construction already ran the audit, so this never throws.
inline MapCertificate certify(const ExpandingMap& map) { return map.certificate(); }

}  // namespace expcircle
