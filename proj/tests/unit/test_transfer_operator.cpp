#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "expcircle/errors.hpp"
#include "expcircle/observables.hpp"
#include "expcircle/system_constants.hpp"
#include "expcircle/transfer_operator.hpp"

using namespace expcircle;
using Catch::Approx;

namespace {

GridFunction one_plus_half_cos(std::size_t m, int k) {
    return GridFunction::constant(m, 1.0) + 0.5 * observables::cos_mode(m, k);
}

double sup_diff(const GridFunction& a, const GridFunction& b) { return sup_norm(a - b); }

}  // namespace

TEST_CASE("the doubling operator fixes constants exactly") {
    const TransferOperator op(ExpandingMap::linear(2), 4096);
    const auto u = op.apply(GridFunction::constant(4096, 1.0));
    for (double v : u.values()) CHECK(v == 1.0);
    CHECK(op.preimage(1024, 0) == 0.125);
    CHECK(op.weight(1024, 1) == 0.5);
}

TEST_CASE("branch cancellation removes the first mode") {
    const TransferOperator op(ExpandingMap::linear(2), 4096);
    CHECK(sup_diff(op.apply(one_plus_half_cos(4096, 1)), GridFunction::constant(4096, 1.0)) < 1e-10);
    // cos 2 pi k x folds onto cos 2 pi (k/2) x for even k, and odd modes cancel
    CHECK(sup_norm(op.apply(observables::cos_mode(4096, 3))) < 1e-10);
}

TEST_CASE("frequency halving is limited by interpolation error") {
    // Halving 1 + cos 4 pi x reads the interpolant off-node, so the error is
    // the O(M^-2) linear-interpolation error.
    auto err = [](std::size_t m) {
        const TransferOperator op(ExpandingMap::linear(2), m);
        return sup_diff(op.apply(one_plus_half_cos(m, 2)), one_plus_half_cos(m, 1));
    };
    const double e4096 = err(4096);
    CHECK(e4096 == Approx(0.5 * (1 - std::cos(kTwoPi / 4096))).epsilon(1e-5));
    CHECK(err(2048) / e4096 == Approx(4.0).epsilon(1e-3));
    CHECK(err(std::size_t{1} << 19) < 1e-10);
}

TEST_CASE("repeated halving reaches the uniform density after k+1 steps") {
    const std::size_t m = 4096;
    const TransferOperator op(ExpandingMap::linear(2), m);
    for (int k = 1; k <= 5; ++k) {
        const auto psi = GridDensity::normalize(one_plus_half_cos(m, 1 << k));
        const auto after = iterate(op, psi, k + 1).density;
        CHECK(sup_diff(after, GridFunction::constant(m, 1.0)) < 1e-8);
    }
}

TEST_CASE("apply to a density renormalizes") {
    const auto map = ExpandingMap::perturbed(2, 0.05);
    const auto psi = observables::exp_cos_density(4096, 1.0);
    const auto out = apply(map, psi);
    CHECK(integrate(out) == Approx(1.0).margin(1e-14));
    CHECK(inf_value(out) > 0.0);
    const TransferOperator small(map, 1024);
    CHECK_THROWS_AS(small.apply(psi), ResolutionMismatch);
}

TEST_CASE("iterate and cesaro") {
    const TransferOperator op(ExpandingMap::perturbed(2, 0.05), 1024);
    const auto psi = observables::exp_cos_density(1024, 0.7);
    const auto r0 = iterate(op, psi, 0);
    CHECK(l1_distance(r0.density, psi) == 0.0);
    CHECK(r0.diagnostics.n_steps == 0);
    CHECK_THROWS_AS(iterate(op, psi, -1), InvalidArgument);

    const auto r5 = iterate(op, psi, 5);
    REQUIRE(r5.diagnostics.steps.size() == 5);
    for (const auto& s : r5.diagnostics.steps) {
        CHECK(std::isfinite(s.l1_diff));
        CHECK(s.inf > 0.0);
    }
    CHECK(l1_distance(cesaro(op, psi, 1), psi) < 1e-15);
    CHECK_THROWS_AS(cesaro(op, psi, 0), InvalidArgument);
    const TransferOperator lin(ExpandingMap::linear(2), 1024);
    CHECK(sup_diff(cesaro(lin, GridDensity::uniform(1024), 7), GridFunction::constant(1024, 1.0)) < 1e-15);
}

TEST_CASE("invariant densities of the linear maps are uniform") {
    for (int w : {2, 3}) {
        const TransferOperator op(ExpandingMap::linear(w), 4096);
        const auto r = invariant_density(op);
        CHECK(sup_diff(r.density, GridFunction::constant(4096, 1.0)) < 1e-10);
        CHECK(r.diagnostics.n_steps <= 5);
    }
}

TEST_CASE("invariant density of the perturbed map") {
    const auto map = ExpandingMap::perturbed(2, 0.05);
    const TransferOperator op(map, 4096);
    const auto r = invariant_density(op);
    const double omega = regularity_constant(map);
    CHECK(r.diagnostics.n_steps <= 200);
    CHECK(r.diagnostics.residual < 1e-12);
    CHECK(integrate(r.density) == Approx(1.0).margin(1e-12));
    CHECK(inf_value(r.density) > 0.0);
    CHECK(sup_norm(r.density.function() - GridFunction::constant(4096, 1.0)) > 1e-3);
    CHECK(r.lipschitz_estimate <= 1.05 * (1 + omega) * (1 + omega));

    const auto other = invariant_density(op, observables::exp_cos_density(4096, 0.3), 1e-12, 10000);
    CHECK(l1_distance(other.density, r.density) < 1e-8);
    CHECK_THROWS_AS(invariant_density(op, 1e-12, 3), NoConvergence);
    CHECK_THROWS_AS(invariant_density(op, 0.0, 10), InvalidArgument);
}

TEST_CASE("mass conservation is exact on linear maps and second order on perturbed maps") {
    const auto psi = observables::random_density(4096, 3, 1.0);
    const TransferOperator lin(ExpandingMap::linear(3), 4096);
    CHECK(std::abs(integrate(lin.apply(psi.function())) - 1.0) < 1e-14);

    // The pullback reads psi off-node, so mass drifts by the interpolation error.
    auto drift = [](std::size_t m) {
        const TransferOperator op(ExpandingMap::perturbed(2, 0.05), m);
        return std::abs(integrate(op.apply(observables::exp_cos_density(m, 2.0).function())) - 1.0);
    };
    const double d4096 = drift(4096), d32768 = drift(32768);
    CHECK(d4096 > 1e-10);
    CHECK(d32768 < 1e-10);
    CHECK(d4096 / d32768 > 30.0);
}

TEST_CASE("positivity and L1 contraction") {
    const TransferOperator op(ExpandingMap::perturbed(2, 0.1), 2048);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto u = observables::random_lipschitz(2048, s);
        const auto v = observables::random_lipschitz(2048, s + 100);
        CHECK(l1_norm(op.apply(u)) <= l1_norm(u) * (1 + 1e-10));
        CHECK(l1_distance(op.apply(u), op.apply(v)) <= l1_distance(u, v) * (1 + 1e-10));
        const auto pos = observables::random_density(2048, s, 2.0);
        CHECK(inf_value(op.apply(pos.function())) >= 0.0);
    }
}

TEST_CASE("sup, C1 and derivative-L1 bounds") {
    const TransferOperator lin(ExpandingMap::linear(2), 1024);
    const auto r1 = check_sup_bound(lin, GridFunction::constant(1024, 1.0), 10);
    CHECK(r1.lhs == 1.0);
    CHECK(r1.rhs == 1.0);
    CHECK(r1.ok);
    const auto rand = observables::random_density(1024, 1, 1.0).function();
    CHECK(check_sup_bound(lin, rand, 10).rhs == sup_norm(rand));
    CHECK(check_sup_bound(lin, rand, 10).ok);

    const auto map = ExpandingMap::perturbed(2, 0.05);
    const TransferOperator op(map, 2048);
    const double omega = regularity_constant(map);
    const auto one = check_sup_bound(op, GridFunction::constant(2048, 1.0), 40);
    CHECK(one.ok);
    CHECK(one.lhs <= 1 + omega);
    CHECK(check_c1_bound(lin, GridFunction::constant(1024, 1.0), 5).ok);
    CHECK(check_c1_bound(op, one_plus_half_cos(2048, 1), 30).ok);
    for (std::uint64_t s = 0; s < 5; ++s) {
        CHECK(check_sup_bound(op, observables::random_density(2048, s, 1.0), 40).ok);
        CHECK(check_derivative_l1_bound(op, observables::random_lipschitz(2048, s), 20).ok);
    }
}

TEST_CASE("regularity constant") {
    CHECK(regularity_constant(ExpandingMap::linear(2)) == 0.0);
    CHECK(regularity_constant(ExpandingMap::perturbed(2, 0.05)) == Approx(1.7072216977591104).epsilon(1e-14));
}
