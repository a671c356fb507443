#pragma once

#include <string>
#include <vector>

#include "expcircle/density_grid.hpp"
#include "expcircle/system_constants.hpp"
#include "expcircle/transfer_operator.hpp"

namespace expcircle {

/// Tolerance of the invariance precondition ||L phi - phi||_{L^1}.
inline constexpr double kInvarianceTolerance = 1e-10;

/// int f L^n(g phi) dm - (int f phi dm)(int g phi dm). Throws NotInvariant
/// unless phi passes the invariance check.
double correlation(const TransferOperator& op, const GridDensity& phi, const GridFunction& f,
                   const GridFunction& g, int n);

/// corr_0 .. corr_{n_max}, sharing the iterates of g phi.
std::vector<double> correlation_series(const TransferOperator& op, const GridDensity& phi, const GridFunction& f,
                                       const GridFunction& g, int n_max);

/// phi (g + 2||g||) / (int g phi + 2||g||). Throws ZeroObservable for g = 0.
GridDensity normalized_observable_density(const GridFunction& g, const GridDensity& phi);

struct DecayRow {
    int n = 0;
    double corr = 0.0;
    double bound = 0.0;            ///< C ||f|| (||g|| + H(g)) theta_paper^(alpha n)
    double reduction = 0.0;        ///< 3 ||g|| ||f|| ||L^n psi - phi||_{L^1}
    bool ok = false;               ///< |corr| <= bound + 1e-9
    bool reduction_ok = false;     ///< |corr| <= reduction + 1e-8
    bool chain_ok = false;         ///< reduction <= bound + 1e-9
};

/// The bounds use grid estimates of ||f||, ||g|| and H(g), so they audit the
/// discretized objects rather than prove anything about the continuum.
struct DecayReport {
    ConstantsLedger ledger;
    double f_sup = 0.0;
    double g_sup = 0.0;
    double g_holder = 0.0;
    std::vector<DecayRow> rows;
    double fitted_rate = 0.0;  ///< slope of log|corr_n| over n with |corr_n| > 1e-12 (NaN if < 2 points)
    bool ok = false;           ///< every row's ok flag
    bool reduction_ok = false; ///< every reduction_ok and chain_ok flag

    std::string to_csv() const;  ///< n,corr,bound,ok
    std::string to_json() const;
};

inline constexpr int kDefaultDecaySteps = 60;

DecayReport decay_report(const TransferOperator& op, const GridDensity& phi, const GridFunction& f,
                         const GridFunction& g, double alpha, int n_max = kDefaultDecaySteps);
/// Computes the invariant density first.
DecayReport decay_report(const TransferOperator& op, const GridFunction& f, const GridFunction& g, double alpha,
                         int n_max = kDefaultDecaySteps);

struct ConvergenceRow {
    int n = 0;
    double l1_err = 0.0;
    double bound = 0.0;  ///< 8 (1 + H(psi)) theta_paper^(alpha n)
    bool ok = false;
};

struct ConvergenceReport {
    double psi_holder = 0.0;
    std::vector<ConvergenceRow> rows;
    bool ok = false;
};

ConvergenceReport density_convergence_report(const TransferOperator& op, const GridDensity& phi,
                                             const GridDensity& psi, double alpha, int n_max);
ConvergenceReport density_convergence_report(const TransferOperator& op, const GridDensity& psi, double alpha,
                                             int n_max);

}  // namespace expcircle
