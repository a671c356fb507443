#pragma once

#include <cstddef>
#include <vector>

#include "expcircle/circle_map.hpp"
#include "expcircle/density_grid.hpp"

namespace expcircle {

/// Transfer operator of an expanding map on a fixed grid:
///
///   (L u)(x_j) = sum over the w preimages y of x_j of u(y) / T'(y),
///
/// with u(y) read off the linear interpolant. The preimages of every node are
/// solved once at construction, so each application is a sparse O(w M) sum.
class TransferOperator {
public:
    TransferOperator(ExpandingMap map, std::size_t resolution = kDefaultResolution);

    const ExpandingMap& map() const { return map_; }
    std::size_t resolution() const { return resolution_; }

    /// Linear application to a signed function; no renormalization.
    GridFunction apply(const GridFunction& u) const;
    /// Application to a density, renormalized to unit mass afterwards.
    GridDensity apply(const GridDensity& psi) const;

    /// Preimage of node j on branch i, and the weight 1 / T'(y).
    double preimage(std::size_t node, int branch) const;
    double weight(std::size_t node, int branch) const;

private:
    struct Tap {
        std::size_t cell;
        double frac;
        double weight;
        double point;
    };

    void require_resolution(const GridFunction& u) const;

    ExpandingMap map_;
    std::size_t resolution_;
    std::vector<Tap> taps_;  // node-major, w taps per node
};

GridDensity apply(const ExpandingMap& map, const GridDensity& psi);

struct IterationStep {
    int step = 0;
    double l1_diff = 0.0;  ///< ||L^n psi - L^{n-1} psi||_{L^1}
    double sup = 0.0;
    double inf = 0.0;
    double d_l1 = 0.0;  ///< ||(L^n psi)'||_{L^1} of the interpolant
};

struct IterationDiagnostics {
    int n_steps = 0;
    std::vector<IterationStep> steps;
    double final_sup = 0.0;
    double final_inf = 0.0;
    /// ||L phi - phi||_{L^1} after the last step (filled by invariant_density).
    double residual = 0.0;
};

struct IterationResult {
    GridDensity density;
    IterationDiagnostics diagnostics;
};

/// n-fold application with per-step diagnostics; n = 0 returns psi.
IterationResult iterate(const TransferOperator& op, const GridDensity& psi, int n);

/// (1/N) sum_{n=0}^{N-1} L^n psi.
GridDensity cesaro(const TransferOperator& op, const GridDensity& psi, int n_terms);

struct InvariantDensityResult {
    GridDensity density;
    IterationDiagnostics diagnostics;
    double lipschitz_estimate = 0.0;  ///< largest adjacent slope
};

inline constexpr double kInvariantTolerance = 1e-12;
inline constexpr int kInvariantMaxIterations = 10000;

/// Iterates from `initial` (uniform by default) until the successive L^1
/// difference drops below tol. Throws NoConvergence after max_iter steps.
InvariantDensityResult invariant_density(const TransferOperator& op, double tol = kInvariantTolerance,
                                         int max_iter = kInvariantMaxIterations);
InvariantDensityResult invariant_density(const TransferOperator& op, const GridDensity& initial, double tol,
                                         int max_iter);

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

/// max_{k<=n} ||L^k psi||_inf against (1 + Omega) ||psi||_inf.
BoundCheck check_sup_bound(const TransferOperator& op, const GridFunction& psi, int n);

/// max_{k<=n} (||L^k psi||_inf + ||D L^k psi||_inf) against
/// (1 + Omega)^2 (||psi||_inf + ||D psi||_inf), D a central difference;
/// passes within a 2% discretization slack.
BoundCheck check_c1_bound(const TransferOperator& op, const GridFunction& psi, int n);

/// max_{k<=n} of ||(L^k psi)'||_{L^1} - lambda^-k ||psi'||_{L^1} against
/// Omega ||psi||_{L^1}.
BoundCheck check_derivative_l1_bound(const TransferOperator& op, const GridFunction& psi, int n);

/// Omega = ||T''||_inf / (lambda (lambda - 1)).
double regularity_constant(const ExpandingMap& map);

}  // namespace expcircle
