#include "expcircle/circle_map.hpp"

#include <cstdio>
#include <sstream>

#include "expcircle/errors.hpp"
#include "expcircle/roots.hpp"

namespace expcircle {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ExpandingMap ExpandingMap::linear(int w) {
    if (w < 2) throw NotExpanding("linear map needs w >= 2 to expand, got w = " + std::to_string(w));
    ExpandingMap m;
    m.family_ = MapFamily::linear;
    m.w_ = w;
    m.cert_ = {static_cast<double>(w), w, 0.0, static_cast<double>(w)};
    m.audit_and_anchor(false);
    return m;
}

ExpandingMap ExpandingMap::perturbed(int w, double eps) {
    if (w < 2) throw NotExpanding("perturbed map needs w >= 2, got w = " + std::to_string(w));
    if (!std::isfinite(eps)) throw InvalidMap("perturbation amplitude must be finite");
    const double swing = std::abs(kTwoPi * eps);
    if (!(swing < w - 1.0)) {
        throw NotExpanding("perturbed{" + std::to_string(w) + "," + fmt(eps) +
                           "}: min T' = w - 2 pi |eps| = " + fmt(w - swing) + " is not > 1");
    }
    ExpandingMap m;
    m.family_ = MapFamily::perturbed;
    m.w_ = w;
    m.eps_ = eps;
    m.cert_ = {w - swing, w, kTwoPi * kTwoPi * std::abs(eps), w + swing};
    m.audit_and_anchor(false);
    return m;
}

ExpandingMap ExpandingMap::custom(CustomMapSpec spec) {
    if (!spec.lift || !spec.d1 || !spec.d2) throw InvalidMap("custom map needs lift, d1 and d2 handles");
    if (!(spec.lambda > 1.0)) throw NotExpanding("custom map: asserted lambda must exceed 1");
    if (spec.winding < 1) throw DegreeMismatch("custom map: winding must be a positive integer");
    if (!(spec.d2_sup >= 0.0)) throw InvalidMap("custom map: d2_sup must be >= 0");
    ExpandingMap m;
    m.family_ = MapFamily::custom;
    m.w_ = spec.winding;
    m.cert_ = {spec.lambda, spec.winding, spec.d2_sup, 0.0};
    m.custom_ = std::make_shared<const CustomMapSpec>(std::move(spec));
    m.audit_and_anchor(true);
    return m;
}

void ExpandingMap::audit_and_anchor(bool audit_d2) {
    const std::size_t n = kAuditPoints;
    const double h = 1.0 / static_cast<double>(n);
    double d1_max = 0.0;
    double winding_sum = 0.0;
    double prev = lift(0.0);
    const double base = prev;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = static_cast<double>(j) * h;
        const double d1 = derivative(x);
        if (!(d1 >= cert_.lambda)) {
            throw NotExpanding(describe() + ": T'(" + fmt(x) + ") = " + fmt(d1) + " < lambda = " +
                               fmt(cert_.lambda));
        }
        d1_max = std::max(d1_max, d1);
        if (audit_d2) {
            const double d2 = second_derivative(x);
            if (!(std::abs(d2) <= cert_.d2_sup)) {
                throw InvalidMap(describe() + ": |T''(" + fmt(x) + ")| = " + fmt(std::abs(d2)) +
                                 " exceeds asserted d2_sup = " + fmt(cert_.d2_sup));
            }
        }
        const double next = lift(static_cast<double>(j + 1) * h);
        winding_sum += next - prev;
        prev = next;
        if (j % 4096 == 0) {
            const double shift = lift(x + 1.0) - lift(x);
            if (std::abs(shift - w_) > 1e-9 * std::max(1.0, w_)) {
                throw DegreeMismatch(describe() + ": lift(x+1) - lift(x) = " + fmt(shift) + " at x = " +
                                     fmt(x) + ", expected " + fmt(w_));
            }
        }
    }
    const long grid_winding = std::lround(winding_sum);
    if (grid_winding != cert_.winding || std::abs(winding_sum - cert_.winding) > 1e-6) {
        throw DegreeMismatch(describe() + ": grid winding " + fmt(winding_sum) + " != w = " +
                             std::to_string(cert_.winding));
    }
    if (family_ == MapFamily::custom) {
        // Between audit nodes T' can exceed the sampled max by at most d2_sup * h / 2.
        cert_.d1_sup = d1_max + 0.5 * cert_.d2_sup * h;
    }

    anchors_.assign(static_cast<std::size_t>(cert_.winding) + 1, 0.0);
    anchors_.back() = 1.0;
    const double inv_w = 1.0 / w_;
    for (int i = 1; i < cert_.winding; ++i) {
        if (family_ == MapFamily::linear) {
            anchors_[i] = i * inv_w;
            continue;
        }
        const double target = base + i;
        anchors_[i] = roots::solve_increasing([this](double y) { return lift(y); },
                                              [this](double y) { return derivative(y); }, target,
                                              anchors_[i - 1], 1.0, i * inv_w);
    }
}

std::string ExpandingMap::describe() const {
    std::ostringstream os;
    switch (family_) {
    case MapFamily::linear: os << "linear{" << cert_.winding << "}"; break;
    case MapFamily::perturbed: os << "perturbed{" << cert_.winding << "," << eps_ << "}"; break;
    case MapFamily::custom: os << (custom_ ? custom_->label : std::string("custom")); break;
    }
    return os.str();
}

}  // namespace expcircle
