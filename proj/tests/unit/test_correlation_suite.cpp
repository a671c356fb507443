#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <json.hpp>

#include "expcircle/correlation_suite.hpp"
#include "expcircle/errors.hpp"
#include "expcircle/observables.hpp"

using namespace expcircle;
using Catch::Approx;

TEST_CASE("correlations on the doubling map") {
    const std::size_t m = 4096;
    const TransferOperator op(ExpandingMap::linear(2), m);
    const auto phi = GridDensity::uniform(m);
    const auto c = observables::cos_mode(m);
    CHECK(correlation(op, phi, c, c, 0) == Approx(0.5).margin(1e-10));
    for (int n = 1; n <= 5; ++n) CHECK(std::abs(correlation(op, phi, c, c, n)) < 1e-9);
    CHECK(std::abs(correlation(op, phi, c, GridFunction::constant(m, 3.0), 4)) < 1e-15);
}

TEST_CASE("correlations against a constant observable vanish") {
    const std::size_t m = 4096;
    const TransferOperator op(ExpandingMap::perturbed(2, 0.05), m);
    const auto phi = invariant_density(op).density;
    const auto f = observables::smoothed_step(m);
    const auto series = correlation_series(op, phi, f, GridFunction::constant(m, 2.0), 20);
    for (double v : series) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("correlation requires an invariant density") {
    const std::size_t m = 1024;
    const TransferOperator op(ExpandingMap::perturbed(2, 0.05), m);
    const auto c = observables::cos_mode(m);
    CHECK_THROWS_AS(correlation(op, GridDensity::uniform(m), c, c, 3), NotInvariant);
    CHECK_THROWS_AS(correlation_series(op, invariant_density(op).density, c, c, -1), InvalidArgument);
}

TEST_CASE("normalized observable density") {
    const std::size_t m = 1024;
    const auto phi = observables::exp_cos_density(m, 0.4);
    const auto psi = normalized_observable_density(GridFunction::constant(m, 1.0), phi);
    CHECK(l1_distance(psi, phi) < 1e-15);
    const auto psi2 = normalized_observable_density(observables::cos_mode(m), phi);
    CHECK(inf_value(psi2) > 0.0);
    CHECK_THROWS_AS(normalized_observable_density(GridFunction::constant(m, 0.0), phi), ZeroObservable);
}

TEST_CASE("decay reports") {
    const std::size_t m = 4096;
    const TransferOperator lin(ExpandingMap::linear(2), m);
    const auto c = observables::cos_mode(m);
    const auto rl = decay_report(lin, c, c, 1.0, 20);
    CHECK(rl.ok);
    for (const auto& row : rl.rows) CHECK(row.bound > 0.0);

    const TransferOperator op(ExpandingMap::perturbed(2, 0.05), m);
    const auto phi = invariant_density(op).density;
    const auto f = observables::smoothed_step(m);
    const auto r = decay_report(op, phi, f, c, 1.0, 60);
    CHECK(r.ok);
    CHECK(r.reduction_ok);
    CHECK(r.rows.front().bound == Approx(r.ledger.C * r.f_sup * (r.g_sup + r.g_holder)));
    CHECK(r.fitted_rate < 0.0);
    CHECK(r.to_csv().rfind("n,corr,bound,ok\n", 0) == 0);
    const auto j = nlohmann::json::parse(r.to_json());
    CHECK(j.at("ok").get<bool>());
    CHECK(j.at("rows").size() == r.rows.size());

    // scaling g by 10 scales every correlation, bound and reduction term
    const auto r10 = decay_report(op, phi, f, c * 10.0, 1.0, 60);
    REQUIRE(r10.rows.size() == r.rows.size());
    for (std::size_t n = 0; n < r.rows.size(); ++n) {
        CHECK(r10.rows[n].corr == Approx(10 * r.rows[n].corr).margin(1e-12));
        CHECK(r10.rows[n].bound == Approx(10 * r.rows[n].bound));
        CHECK(r10.rows[n].ok == r.rows[n].ok);
    }
}

TEST_CASE("density convergence report") {
    const std::size_t m = 2048;
    const TransferOperator op(ExpandingMap::perturbed(2, 0.05), m);
    const auto phi = invariant_density(op).density;
    const auto same = density_convergence_report(op, phi, phi, 1.0, 10);
    for (const auto& row : same.rows) CHECK(row.l1_err < 1e-12);
    const auto r = density_convergence_report(op, phi, observables::exp_cos_density(m, 1.0), 0.5, 60);
    CHECK(r.ok);
    CHECK(r.rows.size() == 61);
    CHECK(r.rows.back().l1_err < r.rows.front().l1_err);
    CHECK_THROWS_AS(density_convergence_report(op, phi, phi, 1.0, -1), InvalidArgument);
}
