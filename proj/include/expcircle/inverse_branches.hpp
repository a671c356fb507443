#pragma once

#include <functional>
#include <span>
#include <vector>

#include "expcircle/circle_map.hpp"

namespace expcircle {

/// Index of an inverse branch of T^n. path[k] is the depth-1 branch taken at
/// pullback step k, starting from the base point (shallowest step first).
/// Depth-1 branch i is the preimage lying in [b_i, b_{i+1}), see
/// ExpandingMap::branch_anchors, so branch order is preimage order in [0,1).
struct BranchId {
    std::vector<int> path;

    int depth() const { return static_cast<int>(path.size()); }
    friend bool operator==(const BranchId&, const BranchId&) = default;
    friend auto operator<=>(const BranchId&, const BranchId&) = default;
};

struct Preimage {
    BranchId id;
    CirclePoint point;
};

/// Largest depth accepted by exhaustive branch enumeration.
inline constexpr int kMaxEnumerationDepth = 12;

/// Preimage of x on depth-1 branch i, as a value in [b_i, b_{i+1}].
double branch_preimage(const ExpandingMap& map, double x, int branch);

/// All w points y with T(y) = x, sorted by y; element i carries BranchId{{i}}.
std::vector<Preimage> preimages(const ExpandingMap& map, CirclePoint x);

/// (T^n)_id^{-1}(x) by composing single-step pullbacks along id.path.
CirclePoint pullback(const ExpandingMap& map, CirclePoint x, const BranchId& id);

/// Arc of the circle starting at `start` and running counter-clockwise for `length`.
struct Arc {
    double start = 0.0;
    double length = 0.0;

    bool contains(double x) const;
    /// Position of x measured from `start` along the arc.
    double offset(double x) const {
        const double o = reduce_mod1(x - start);
        return o > 1.0 - 1e-15 ? o - 1.0 : o;
    }
};

/// The short arc from x to y (length d(x, y)).
Arc short_arc(double x, double y);

struct ContractionCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

/// Pulls x back along `id` and y along the continuation of the same branch
/// over the arc joining them; compares lhs = d(x_n, y_n) with lambda^-n d(x, y).
/// Throws ArcViolation unless both points lie in `arc` and |arc| <= 1/2.
ContractionCheck branch_contraction_check(const ExpandingMap& map, const Arc& arc, CirclePoint x,
                                          CirclePoint y, const BranchId& id);
ContractionCheck branch_contraction_check(const ExpandingMap& map, CirclePoint x, CirclePoint y,
                                          const BranchId& id);

/// (T^n)'((T^n)^{-1}_id x) / (T^n)'((T^n)^{-1}_id y) along the same branch continuation.
double distortion_ratio(const ExpandingMap& map, const Arc& arc, CirclePoint x, CirclePoint y,
                        const BranchId& id);
double distortion_ratio(const ExpandingMap& map, CirclePoint x, CirclePoint y, const BranchId& id);

/// One node of the joint pullback tree of a pair (x, y).
struct BranchPairVisit {
    std::span<const int> path;
    double x_pre = 0.0;       ///< pullback of x, in [0,1)
    double y_pre = 0.0;       ///< continuation pullback of y, in [0,1)
    double separation = 0.0;  ///< d(x_pre, y_pre)
    double log_ratio = 0.0;   ///< log of the distortion ratio at this depth
};

/// Depth-first enumeration of every branch of depth 1..max_depth for the pair
/// (x, y). Throws InvalidArgument when max_depth exceeds kMaxEnumerationDepth.
void for_each_branch_pair(const ExpandingMap& map, CirclePoint x, CirclePoint y, int max_depth,
                          const std::function<void(const BranchPairVisit&)>& visit);

}  // namespace expcircle
