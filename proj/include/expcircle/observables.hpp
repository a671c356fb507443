#pragma once

#include <cstdint>

#include "expcircle/density_grid.hpp"

// Test functions and densities shared by the audits, the CLI and the tests.
namespace expcircle::observables {

/// cos(2 pi k x).
GridFunction cos_mode(std::size_t resolution, int k = 1);

/// Smoothed indicator of [1/4, 3/4]: (tanh((x - 1/4)/0.02) - tanh((x - 3/4)/0.02)) / 2.
GridFunction smoothed_step(std::size_t resolution);

/// d(x, 0)^beta.
GridFunction distance_power(std::size_t resolution, double beta);

/// Random trigonometric polynomial sum_{k<=4} (a_k cos + b_k sin)(2 pi k x) / k
/// with coefficients uniform in [-1, 1] drawn from the given seed.
GridFunction random_lipschitz(std::size_t resolution, std::uint64_t seed);

/// exp(A cos(2 pi k x)) normalized; H_1(log psi) = 2 pi k |A|.
GridDensity exp_cos_density(std::size_t resolution, double amplitude, int k = 1);

/// exp(s * random_lipschitz(seed)) normalized, a strictly positive smooth density.
GridDensity random_density(std::size_t resolution, std::uint64_t seed, double scale = 1.0);

}  // namespace expcircle::observables
