#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "expcircle/circle_map.hpp"
#include "expcircle/density_grid.hpp"
#include "expcircle/transfer_operator.hpp"

// Numerical audits of the structural properties. Each audit counts its
// individual checks, records the largest excess lhs - rhs, and keeps the
// first violation as a readable detail string.
namespace expcircle::audit {

struct AuditResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t violations = 0;
    double worst_excess = -1e300;
    std::string detail;

    bool passed() const { return checks > 0 && violations == 0; }
    /// Records lhs <= rhs; `what` is only evaluated on a violation.
    void record(double lhs, double rhs, const std::function<std::string()>& what);
    void record(bool ok, const std::function<std::string()>& what);
};

/// The positive smooth densities used by the sweeps.
std::vector<GridDensity> test_densities(std::size_t resolution, std::uint64_t seed);

AuditResult map_properties(const ExpandingMap& map, std::uint64_t seed, std::size_t samples = 10000);
AuditResult branch_round_trip(const ExpandingMap& map, std::uint64_t seed, std::size_t samples = 200);
AuditResult branch_partition(const ExpandingMap& map, std::uint64_t seed, std::size_t samples = 1000);

struct BranchPairAudit {
    AuditResult contraction;
    AuditResult distortion;
};
/// Every path of depth <= max_depth for `pairs` random pairs.
BranchPairAudit branch_pairs(const ExpandingMap& map, std::uint64_t seed, std::size_t pairs = 1000,
                             int max_depth = 8);

AuditResult grid_properties(std::uint64_t seed, std::size_t resolution = kDefaultResolution);

struct OperatorIdentityAudit {
    AuditResult mass;
    AuditResult positivity;
    AuditResult l1_contraction;
};
OperatorIdentityAudit operator_identities(const TransferOperator& op, std::uint64_t seed, std::size_t count = 100);

AuditResult duality(const TransferOperator& op, std::uint64_t seed, std::size_t count = 20);

struct HolderSweepAudit {
    AuditResult log_contraction;  ///< H(log L^n psi) <= lambda^(-alpha n) H(log psi) + Omega
    AuditResult iterate_holder_cap;  ///< uniform Hoelder cap of L^n psi, n >= 1
    AuditResult iterate_floor;   ///< inf L^n psi >= 1 / (2 ||T'||^N1) for n >= N1
    AuditResult class_floor;      ///< inf L^n psi >= 2a once L^n psi is in the floor class
};
inline const std::vector<double> kSweepAlphas = {0.3, 0.5, 1.0};
HolderSweepAudit holder_sweeps(const TransferOperator& op, const std::vector<GridDensity>& densities,
                               const std::vector<double>& alphas = kSweepAlphas, int n_max = 30);

AuditResult invariant_positivity(const GridDensity& phi);
AuditResult ledger_properties(const ExpandingMap& map);
/// Omega across the perturbed eps sweep 0.01..0.1.
AuditResult omega_monotonicity();

struct ClassAudit {
    AuditResult holder_from_log;
    AuditResult pointwise_log_bounds;
    AuditResult entry;         ///< psi in H_B enters H_{Omega+1} after N(B) steps
    AuditResult floor;         ///< members of H_{Omega+1} stay above 2a
    AuditResult residual;      ///< (psi - a)/(1 - a) lies in H_K
};
ClassAudit class_properties(const TransferOperator& op, const GridDensity& phi, std::uint64_t seed);

struct CouplingAudit {
    AuditResult deterministic;
    AuditResult monte_carlo;
};
CouplingAudit coupling(const TransferOperator& op, const GridDensity& phi, double alpha, std::size_t trials,
                       std::uint64_t seed);

struct CorrelationAudit {
    AuditResult main_bound;
    AuditResult reduction;
    AuditResult bilinearity;
    AuditResult invariance;
};
CorrelationAudit correlation_sweep(const TransferOperator& op, const GridDensity& phi, std::uint64_t seed,
                                   const std::vector<double>& alphas = kSweepAlphas, int n_max = 60);

AuditResult density_convergence(const TransferOperator& op, const GridDensity& phi,
                                const std::vector<GridDensity>& densities,
                                const std::vector<double>& alphas = kSweepAlphas, int n_max = 120);

/// Invariant densities from two different starting densities agree in L^1.
AuditResult uniqueness(const TransferOperator& op, double tolerance = 1e-8);

/// Grid for the audits of exact identities (mass conservation and the
/// correlation identities). Their quadrature defect decays like M^-2 and is
/// about 1e-9 at M = 4096 on the perturbed maps, above the 1e-10 tolerance.
inline constexpr std::size_t kIdentityResolution = std::size_t{1} << 15;

struct RunOptions {
    std::size_t resolution = kDefaultResolution;
    std::size_t identity_resolution = kIdentityResolution;
    std::uint64_t seed = 42;
    std::size_t trials = 100000;
    double alpha = 1.0;
    int n_max = 60;
};

/// Every audit for one map. Throws NoConvergence if the invariant density
/// cannot be computed.
std::vector<AuditResult> run_all(const ExpandingMap& map, const RunOptions& options);

}  // namespace expcircle::audit
