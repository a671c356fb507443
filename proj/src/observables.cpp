#include "expcircle/observables.hpp"

#include <array>
#include <cmath>

#include "expcircle/rng.hpp"

namespace expcircle::observables {

GridFunction cos_mode(std::size_t resolution, int k) {
    return GridFunction::sample(resolution, [k](double x) { return std::cos(kTwoPi * k * x); });
}

GridFunction smoothed_step(std::size_t resolution) {
    return GridFunction::sample(resolution, [](double x) {
        return 0.5 * (std::tanh((x - 0.25) / 0.02) - std::tanh((x - 0.75) / 0.02));
    });
}

GridFunction distance_power(std::size_t resolution, double beta) {
    return GridFunction::sample(resolution, [beta](double x) { return std::pow(circle_distance(x, 0.0), beta); });
}

GridFunction random_lipschitz(std::size_t resolution, std::uint64_t seed) {
    constexpr int kModes = 4;
    CounterRng rng(seed, 0x0b5e7ab1e5ULL);
    std::array<double, kModes> ca{}, sa{};
    for (int k = 0; k < kModes; ++k) {
        ca[k] = 2.0 * rng.uniform() - 1.0;
        sa[k] = 2.0 * rng.uniform() - 1.0;
    }
    return GridFunction::sample(resolution, [&](double x) {
        double v = 0.0;
        for (int k = 0; k < kModes; ++k) {
            const double t = kTwoPi * (k + 1) * x;
            v += (ca[k] * std::cos(t) + sa[k] * std::sin(t)) / (k + 1);
        }
        return v;
    });
}

GridDensity exp_cos_density(std::size_t resolution, double amplitude, int k) {
    return GridDensity::sample(resolution,
                               [amplitude, k](double x) { return std::exp(amplitude * std::cos(kTwoPi * k * x)); });
}

GridDensity random_density(std::size_t resolution, std::uint64_t seed, double scale) {
    const GridFunction g = random_lipschitz(resolution, seed);
    std::vector<double> v(resolution);
    for (std::size_t j = 0; j < resolution; ++j) v[j] = std::exp(scale * g[j]);
    return GridDensity::normalize(GridFunction(std::move(v)));
}

}  // namespace expcircle::observables
