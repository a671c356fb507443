#include "expcircle/inverse_branches.hpp"

#include <cmath>
#include <string>

#include "expcircle/errors.hpp"
#include "expcircle/roots.hpp"

namespace expcircle {

namespace {

void check_branch(const ExpandingMap& map, int branch) {
    if (branch < 0 || branch >= map.winding()) {
        throw InvalidArgument("branch index " + std::to_string(branch) + " outside [0, " +
                              std::to_string(map.winding()) + ")");
    }
}

// Lift target of x on branch i: lift(0) + i + ((x - lift(0)) mod 1).
double branch_target(double x, int branch, double base) {
    return base + branch + reduce_mod1(x - base);
}

double solve_lift(const ExpandingMap& map, double target, double lo, double hi, double guess) {
    return roots::solve_increasing([&map](double y) { return map.lift(y); },
                                   [&map](double y) { return map.derivative(y); }, target, lo, hi,
                                   guess);
}

// Pull y back next to an already pulled-back x_pre: solves lift(y_pre) =
// lift(x_pre) + delta, where delta is the signed displacement x -> y on the
// arc. Monotonicity of the lift keeps |y_pre - x_pre| <= |delta| / lambda.
double continuation_preimage(const ExpandingMap& map, double x_pre, double delta) {
    if (delta == 0.0) return x_pre;
    if (map.family() == MapFamily::linear) return x_pre + delta / map.winding();
    const double target = map.lift(x_pre) + delta;
    const double reach = std::abs(delta) / map.lambda();
    double lo = delta > 0.0 ? x_pre : x_pre - reach * (1.0 + 1e-12) - 1e-300;
    double hi = delta > 0.0 ? x_pre + reach * (1.0 + 1e-12) + 1e-300 : x_pre;
    if (map.lift(lo) > target) lo -= 1e-15;
    if (map.lift(hi) < target) hi += 1e-15;
    return solve_lift(map, target, lo, hi, x_pre + delta / map.derivative(x_pre));
}

void check_arc(const Arc& arc, double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(arc.start) || !(arc.length >= 0.0) ||
        arc.length > 0.5) {
        throw ArcViolation("arc must have length <= 1/2 and finite endpoints");
    }
    if (!arc.contains(x) || !arc.contains(y)) throw ArcViolation("points do not lie on the given arc");
}

struct PairPullback {
    double x_pre;
    double delta;  // signed lift displacement from x_pre to y_pre
    double log_ratio;
};

PairPullback pull_pair(const ExpandingMap& map, const Arc& arc, CirclePoint x, CirclePoint y,
                       const BranchId& id) {
    check_arc(arc, x.value(), y.value());
    double xv = x.value();
    double delta = arc.offset(y.value()) - arc.offset(xv);
    double log_ratio = 0.0;
    for (int b : id.path) {
        const double xp = branch_preimage(map, xv, b);
        const double yp = continuation_preimage(map, xp, delta);
        log_ratio += std::log(map.derivative(xp)) - std::log(map.derivative(yp));
        delta = yp - xp;
        xv = reduce_mod1(xp);
    }
    return {xv, delta, log_ratio};
}

double path_lambda_power(const ExpandingMap& map, int n) { return std::pow(map.lambda(), -n); }

}  // namespace

double branch_preimage(const ExpandingMap& map, double x, int branch) {
    check_branch(map, branch);
    if (map.family() == MapFamily::linear) return (reduce_mod1(x) + branch) / map.winding();
    const auto anchors = map.branch_anchors();
    const double base = map.lift(0.0);
    const double target = branch_target(x, branch, base);
    const double lo = anchors[branch];
    const double hi = anchors[branch + 1];
    const double frac = target - (base + branch);
    return solve_lift(map, target, lo, hi, lo + frac * (hi - lo));
}

std::vector<Preimage> preimages(const ExpandingMap& map, CirclePoint x) {
    std::vector<Preimage> out;
    out.reserve(static_cast<std::size_t>(map.winding()));
    for (int i = 0; i < map.winding(); ++i) {
        out.push_back({BranchId{{i}}, CirclePoint(branch_preimage(map, x.value(), i))});
    }
    return out;
}

CirclePoint pullback(const ExpandingMap& map, CirclePoint x, const BranchId& id) {
    if (id.path.empty()) throw InvalidArgument("branch id must have depth >= 1");
    double v = x.value();
    for (int b : id.path) v = reduce_mod1(branch_preimage(map, v, b));
    return CirclePoint(v);
}

bool Arc::contains(double x) const {
    // A few ulps of slack: offsets and lengths come from different subtractions.
    const double off = offset(x);
    return off <= length + 4e-16;
}

Arc short_arc(double x, double y) {
    const double disp = circle_displacement(x, y);
    return disp >= 0.0 ? Arc{reduce_mod1(x), disp} : Arc{reduce_mod1(y), -disp};
}

ContractionCheck branch_contraction_check(const ExpandingMap& map, const Arc& arc, CirclePoint x,
                                          CirclePoint y, const BranchId& id) {
    if (id.path.empty()) throw InvalidArgument("branch id must have depth >= 1");
    const double d = std::abs(arc.offset(y.value()) - arc.offset(x.value()));
    const PairPullback p = pull_pair(map, arc, x, y, id);
    ContractionCheck c;
    c.lhs = std::abs(p.delta);
    c.rhs = path_lambda_power(map, id.depth()) * d;
    c.ok = c.lhs <= c.rhs + 1e-10;
    return c;
}

ContractionCheck branch_contraction_check(const ExpandingMap& map, CirclePoint x, CirclePoint y,
                                          const BranchId& id) {
    return branch_contraction_check(map, short_arc(x.value(), y.value()), x, y, id);
}

double distortion_ratio(const ExpandingMap& map, const Arc& arc, CirclePoint x, CirclePoint y,
                        const BranchId& id) {
    if (id.path.empty()) throw InvalidArgument("branch id must have depth >= 1");
    return std::exp(pull_pair(map, arc, x, y, id).log_ratio);
}

double distortion_ratio(const ExpandingMap& map, CirclePoint x, CirclePoint y, const BranchId& id) {
    return distortion_ratio(map, short_arc(x.value(), y.value()), x, y, id);
}

void for_each_branch_pair(const ExpandingMap& map, CirclePoint x, CirclePoint y, int max_depth,
                          const std::function<void(const BranchPairVisit&)>& visit) {
    if (max_depth < 1 || max_depth > kMaxEnumerationDepth) {
        throw InvalidArgument("branch enumeration depth must lie in [1, " +
                              std::to_string(kMaxEnumerationDepth) + "]");
    }
    const Arc arc = short_arc(x.value(), y.value());
    std::vector<int> path;
    path.reserve(static_cast<std::size_t>(max_depth));

    std::function<void(double, double, double)> descend = [&](double xv, double delta, double log_ratio) {
        for (int b = 0; b < map.winding(); ++b) {
            const double xp = branch_preimage(map, xv, b);
            const double yp = continuation_preimage(map, xp, delta);
            const double lr = log_ratio + std::log(map.derivative(xp)) - std::log(map.derivative(yp));
            path.push_back(b);
            BranchPairVisit v;
            v.path = path;
            v.x_pre = reduce_mod1(xp);
            v.y_pre = reduce_mod1(yp);
            v.separation = std::abs(yp - xp);
            v.log_ratio = lr;
            visit(v);
            if (static_cast<int>(path.size()) < max_depth) descend(reduce_mod1(xp), yp - xp, lr);
            path.pop_back();
        }
    };
    descend(x.value(), arc.offset(y.value()) - arc.offset(x.value()), 0.0);
}

}  // namespace expcircle
