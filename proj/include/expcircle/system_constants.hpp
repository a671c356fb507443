#pragma once

#include <string>

#include "expcircle/circle_map.hpp"
#include "expcircle/density_grid.hpp"

namespace expcircle {

/// Every explicit constant attached to a (map, alpha) pair.
struct ConstantsLedger {
    double alpha = 1.0;
    double lambda = 0.0;
    double omega = 0.0;          ///< ||T''|| / (lambda (lambda - 1))
    double a = 0.0;              ///< regeneration weight exp(-(Omega+1)) / 2
    double K = 0.0;              ///< Hoelder-log cap exp(4 (Omega+1))
    int N_K = 1;                 ///< N_of(K)
    double n_k_paper_raw = 0.0;  ///< log K / (alpha log lambda), before floor + 1
    double D_exact = 0.0;        ///< 2 / (1 - a)
    double D_relaxed = 4.0;
    double D_tilde = 8.0;
    double theta_exact = 0.0;  ///< (1 - a)^(1 / (alpha N_K))
    double theta_paper = 0.0;  ///< (1 - exp(-3(Omega+1)))^(log lambda / (4 (Omega+1)))
    double C = 0.0;            ///< 96 (2 + Omega)^2
    double lower_floor = 0.0;  ///< exp(-(Omega+1)) = 2a

    /// Block length floor(log B / (alpha log lambda)) + 1 for B > 1, else 1.
    int N_of(double B) const;

    /// JSON object with 17-digit reals.
    std::string to_json() const;
};

/// Throws InvalidAlpha unless alpha in (0, 1].
ConstantsLedger compute_ledger(const ExpandingMap& map, double alpha);

/// Audit slack added to every grid-estimated class bound.
inline constexpr double kClassSlack = 1e-6;

/// psi > 0, unit mass within 1e-10 and H_alpha(log psi) <= D (+ kClassSlack).
bool hoelder_class_check(const GridDensity& psi, double D, double alpha);

/// exp(-H) <= psi <= exp(H) at all nodes, H the estimated H_alpha(log psi).
bool pointwise_log_bounds_check(const GridDensity& psi, double alpha);

}  // namespace expcircle
