#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "expcircle/density_grid.hpp"
#include "expcircle/system_constants.hpp"
#include "expcircle/transfer_operator.hpp"

namespace expcircle {

/// Residual of psi = a + (1 - a) residual. Throws FloorViolation if
/// inf psi < a, since the residual would go negative.
GridDensity decompose(const GridDensity& psi, double a);

/// Regeneration parameters of a coupling run. Usually taken from the
/// ledger; tests may substitute hypothetical values.
struct CouplingParameters {
    double alpha = 1.0;
    double a = 0.0;
    int block = 1;  ///< epochs at n = k * block
    double D_exact = 0.0;
    double theta_exact = 0.0;
    double K = 0.0;  ///< class cap required of the initial densities

    static CouplingParameters from_ledger(const ConstantsLedger& ledger);
};

struct ContractionRow {
    int n = 0;
    int k = 0;
    double tv_true = 0.0;  ///< L^1 distance of L^n psi1 and L^n psi2
    double bound = 0.0;    ///< 2 (1 - a)^k
    double envelope = 0.0; ///< 2 (1 - a)^(n / block - 1) = D_exact theta_exact^(alpha n)
    /// L^1 error of (1 - (1-a)^k) rho_n + (1-a)^k residual_n against L^n psi, worst of the two.
    double reconstruction_error = 0.0;
    bool ok = false;
};

struct ContractionRun {
    CouplingParameters params;
    std::vector<ContractionRow> rows;  ///< n = 0..n_max
    bool ok = false;
};

inline constexpr double kContractionSlack = 5e-6;
inline constexpr double kReconstructionTolerance = 1e-8;

ContractionRun deterministic_contraction_run(const TransferOperator& op, const GridDensity& psi1,
                                             const GridDensity& psi2, double alpha, int n_max);
ContractionRun deterministic_contraction_run(const TransferOperator& op, const GridDensity& psi1,
                                             const GridDensity& psi2, const CouplingParameters& params,
                                             int n_max);

struct MarginalCheck {
    int n = 0;
    double chi2_x = 0.0;
    double chi2_y = 0.0;
    double p_x = 0.0;
    double p_y = 0.0;
    bool ok = false;
};

struct CouplingRow {
    int n = 0;
    int k = 0;
    double tv_true = 0.0;
    double empirical_mismatch = 0.0;
    double bound_coupling = 0.0;  ///< 2 (1 - a)^k
    double bound_theta = 0.0;     ///< D_exact theta_exact^(alpha n)
    bool mismatch_ok = false;     ///< empirical <= (1 - a)^k + 5 / sqrt(trials)
    bool coupling_ok = false;     ///< tv_true <= 2 empirical + 5 / sqrt(trials)
};

struct CouplingTrace {
    CouplingParameters params;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::vector<CouplingRow> rows;  ///< n = 0..n_max
    /// Per trial, the epoch index k at which the pair merged (0 = never).
    std::vector<int> merge_epoch;
    std::vector<MarginalCheck> marginals;
    bool ok = false;

    /// CSV with header n,k,tv_true,empirical_mismatch,bound_coupling,bound_theta.
    std::string to_csv() const;
    std::string to_json() const;
};

inline constexpr std::size_t kMarginalBins = 64;
inline constexpr double kMarginalPValue = 1e-4;
inline constexpr std::size_t kMinTrials = 10000;

/// Simulates the coupled pair. Trials run concurrently with one counter-based
/// stream per trial, so the trace depends only on (seed, trials, M).
CouplingTrace monte_carlo_coupling(const TransferOperator& op, const GridDensity& psi1, const GridDensity& psi2,
                                   double alpha, int n_max, std::size_t trials, std::uint64_t seed);
CouplingTrace monte_carlo_coupling(const TransferOperator& op, const GridDensity& psi1, const GridDensity& psi2,
                                   const CouplingParameters& params, int n_max, std::size_t trials,
                                   std::uint64_t seed);

/// Chi-square statistic and upper-tail p-value of observed bin counts
/// against expected bin probabilities.
struct ChiSquare {
    double statistic = 0.0;
    double p_value = 0.0;
};
ChiSquare chi_square_test(const std::vector<std::uint64_t>& observed, const std::vector<double>& probabilities);

}  // namespace expcircle
