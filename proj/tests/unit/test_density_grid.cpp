#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "expcircle/density_grid.hpp"
#include "expcircle/errors.hpp"
#include "expcircle/observables.hpp"

using namespace expcircle;
using Catch::Approx;

TEST_CASE("grid construction rejects bad sizes and values") {
    CHECK_THROWS_AS(GridFunction(std::vector<double>(3, 1.0)), InvalidGrid);
    CHECK_THROWS_AS(GridFunction(std::vector<double>(1, 1.0)), InvalidGrid);
    CHECK_THROWS_AS(GridFunction(std::vector<double>{1.0, NAN}), InvalidGrid);
    CHECK_NOTHROW(GridFunction(std::vector<double>(8, 1.0)));
}

TEST_CASE("evaluation is exact at nodes and linear between them") {
    const auto f = GridFunction(std::vector<double>{0.0, 1.0, 4.0, 9.0});
    CHECK(f(0.25) == 1.0);
    CHECK(f(0.375) == 2.5);
    CHECK(f(0.875) == 4.5);  // wraps from 9 back to 0
    CHECK(f(1.25) == 1.0);
    CHECK(f(-0.75) == 1.0);
}

TEST_CASE("integration on the periodic grid") {
    const std::size_t m = 4096;
    CHECK(integrate(GridFunction::constant(m, 1.0)) == 1.0);
    CHECK(std::abs(integrate(observables::cos_mode(m))) < 1e-12);
    const auto c2 = GridFunction::sample(m, [](double x) { return std::pow(std::cos(kTwoPi * x), 2); });
    CHECK(integrate(c2) == Approx(0.5).margin(1e-12));
    // linear and monotone
    const auto f = observables::random_lipschitz(m, 3), g = observables::random_lipschitz(m, 4);
    CHECK(integrate(f * 2.0 + g) == Approx(2 * integrate(f) + integrate(g)).margin(1e-14));
    const auto h = f + 5.0;
    CHECK(integrate(f) <= integrate(h));
}

TEST_CASE("norms and distances") {
    const std::size_t m = 4096;
    const auto one = GridFunction::constant(m, 1.0);
    const auto f = one + 0.5 * observables::cos_mode(m);
    CHECK(l1_distance(f, f) == 0.0);
    CHECK(l1_distance(f, one) == Approx(1.0 / M_PI).margin(2e-3));
    CHECK(sup_norm(f) == 1.5);
    CHECK(inf_value(f) == 0.5);
    CHECK_THROWS_AS(l1_distance(f, GridFunction::constant(1024, 1.0)), ResolutionMismatch);

    // triangle inequality on random triples
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto a = observables::random_lipschitz(256, 3 * s), b = observables::random_lipschitz(256, 3 * s + 1),
                   c = observables::random_lipschitz(256, 3 * s + 2);
        CHECK(l1_distance(a, c) <= l1_distance(a, b) + l1_distance(b, c));
    }
}

TEST_CASE("Hoelder coefficients") {
    CHECK(holder_coefficient(GridFunction::constant(4096, 3.0), 1.0) == 0.0);
    CHECK(holder_coefficient(observables::cos_mode(4096), 1.0) == Approx(kTwoPi).epsilon(2e-3));
    CHECK(holder_coefficient(observables::distance_power(4096, 1.0), 1.0) == Approx(1.0).margin(1e-12));
    CHECK_THROWS_AS(holder_coefficient(observables::cos_mode(64), 0.0), InvalidAlpha);
    CHECK_THROWS_AS(holder_coefficient(observables::cos_mode(64), 1.5), InvalidAlpha);

    // exact scaling and shift invariance on dyadic multiples
    const auto f = observables::random_lipschitz(2048, 9);
    for (double alpha : {0.3, 0.5, 1.0}) {
        const double h = holder_coefficient(f, alpha);
        CHECK(holder_coefficient(f * 4.0, alpha) == 4.0 * h);
        CHECK(holder_coefficient(f * -0.5, alpha) == 0.5 * h);
    }
    const auto dyadic = GridFunction::sample(1024, [](double x) { return std::ldexp(std::round(std::ldexp(std::sin(kTwoPi * x), 30)), -30); });
    CHECK(holder_coefficient(dyadic + 0.25, 0.5) == holder_coefficient(dyadic, 0.5));
}

TEST_CASE("the subsampled estimator never exceeds the full scan") {
    const auto f = observables::random_lipschitz(8192, 5);
    const auto g = observables::distance_power(8192, 0.4);
    for (double alpha : {0.3, 1.0}) {
        double full_f = 0.0, full_g = 0.0;
        const auto v = f.values(), w = g.values();
        for (std::size_t lag = 1; lag <= 4096; lag += 1) {
            const double d = std::pow(static_cast<double>(lag) / 8192.0, alpha);
            for (std::size_t j = 0; j < 8192; j += 64) {
                full_f = std::max(full_f, std::abs(v[j] - v[(j + lag) % 8192]) / d);
                full_g = std::max(full_g, std::abs(w[j] - w[(j + lag) % 8192]) / d);
            }
        }
        const double est_f = holder_coefficient(f, alpha), est_g = holder_coefficient(g, alpha);
        CHECK(est_f >= 0.999 * full_f);
        CHECK(est_g >= 0.999 * full_g);
        if (alpha <= 0.4) CHECK(est_g <= 1.0 + 1e-12);
    }
}

TEST_CASE("integration converges at second order for a C1 function with a kink") {
    // x(1-x)e^x is periodic but its derivative jumps at 0, so the trapezoid
    // error is O(M^-2) rather than spectral.
    auto err = [](std::size_t m) {
        const auto f = GridFunction::sample(m, [](double x) { return x * (1 - x) * std::exp(x); });
        return integrate(f) - (3.0 - std::exp(1.0));
    };
    const double r1 = err(512) / err(1024), r2 = err(1024) / err(2048);
    CHECK(r1 >= 2.5);
    CHECK(r1 <= 6.0);
    CHECK(r2 >= 2.5);
    CHECK(r2 <= 6.0);
}

TEST_CASE("densities validate positivity and mass") {
    CHECK_THROWS_AS(GridDensity(GridFunction::constant(8, 2.0)), InvalidArgument);
    CHECK_THROWS_AS(GridDensity::normalize(GridFunction(std::vector<double>{1, -1, 1, 1})), NonPositiveDensity);
    CHECK_THROWS_AS(GridDensity::normalize(GridFunction::constant(8, 0.0)), NonPositiveDensity);
    const auto psi = GridDensity::normalize(GridFunction(std::vector<double>{1, 2, 3, 2}));
    CHECK(integrate(psi) == Approx(1.0).margin(1e-15));
    CHECK(psi[2] == Approx(1.5).margin(1e-15));
}

TEST_CASE("log transform") {
    const auto u = log_transform(GridDensity::uniform(64));
    CHECK(sup_norm(u) == 0.0);
    const double a = 0.05;
    const auto psi = GridDensity::normalize(GridFunction::sample(64, [&](double x) { return 2 * a + std::sin(M_PI * x) * std::sin(M_PI * x); }));
    const auto lp = log_transform(psi);
    for (std::size_t j = 0; j < 64; ++j) CHECK(lp[j] >= std::log(inf_value(psi)));
    CHECK_THROWS_AS(log_transform(GridDensity::normalize(GridFunction(std::vector<double>{0, 1, 1, 1}))),
                    NonPositiveDensity);
}

TEST_CASE("inverse-CDF sampling") {
    const auto uni = GridDensity::uniform(4096);
    DensitySampler sampler(uni);
    CounterRng rng(42, 0);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = sampler.draw(rng);
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double n = static_cast<double>(xs.size());
        ks = std::max({ks, std::abs(xs[i] - i / n), std::abs(xs[i] - (i + 1) / n)});
    }
    CHECK(ks < 0.01);

    std::vector<double> spike(1024, 0.0);
    spike[300] = 1024.0;
    const auto point = GridDensity(GridFunction(spike));
    CounterRng r2(7, 3);
    for (int i = 0; i < 1000; ++i) CHECK(circle_distance(sample(point, r2).value(), 300.0 / 1024) <= 1.0 / 1024);

    CounterRng a(11, 5), b(11, 5);
    DensitySampler s2(observables::exp_cos_density(512, 1.0));
    for (int i = 0; i < 100; ++i) CHECK(s2.draw(a) == s2.draw(b));
}

TEST_CASE("interval integration of the interpolant") {
    const auto f = GridFunction(std::vector<double>{0.0, 1.0, 0.0, 1.0});
    CHECK(integrate_interval(f, 0.0, 1.0) == Approx(integrate(f)).margin(1e-15));
    CHECK(integrate_interval(f, 0.0, 0.25) == Approx(0.125).margin(1e-15));
    CHECK(integrate_interval(f, 0.125, 0.25) == Approx(0.125 * 0.75).margin(1e-15));
}

TEST_CASE("CSV round trip and validation") {
    const auto f = observables::random_lipschitz(64, 1);
    std::stringstream ss;
    write_csv(ss, f);
    const auto g = read_csv(ss);
    REQUIRE(g.resolution() == 64);
    for (std::size_t j = 0; j < 64; ++j) CHECK(g[j] == f[j]);

    std::stringstream bad("x,value\n0,1\n0.3,1\n0.5,1\n0.75,1\n");
    CHECK_THROWS_AS(read_csv(bad), InvalidGrid);
    std::stringstream odd("x,value\n0,1\n0.3333333333333333,1\n0.6666666666666666,1\n");
    CHECK_THROWS_AS(read_csv(odd), InvalidGrid);
}
