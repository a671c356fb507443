#include "expcircle/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "expcircle/correlation_suite.hpp"
#include "expcircle/coupling_lab.hpp"
#include "expcircle/errors.hpp"
#include "expcircle/inverse_branches.hpp"
#include "expcircle/observables.hpp"
#include "expcircle/rng.hpp"
#include "expcircle/roots.hpp"
#include "expcircle/system_constants.hpp"

namespace expcircle::audit {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string named(const ExpandingMap& map, const std::string& what) { return what + " [" + map.describe() + "]"; }

AuditResult make(std::string name) {
    AuditResult r;
    r.name = std::move(name);
    return r;
}

// Exact in every arithmetic step below: values on a 2^-30 lattice.
GridFunction dyadic(const GridFunction& f) {
    std::vector<double> v(f.values().begin(), f.values().end());
    for (double& x : v) x = std::ldexp(std::round(std::ldexp(x, 30)), -30);
    return GridFunction(std::move(v));
}

GridFunction rough_nonnegative(std::size_t m, CounterRng& rng) {
    std::vector<double> v(m);
    for (double& x : v) x = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
    return GridFunction(std::move(v));
}

}  // namespace

void AuditResult::record(double lhs, double rhs, const std::function<std::string()>& what) {
    ++checks;
    const double excess = lhs - rhs;
    worst_excess = std::max(worst_excess, excess);
    if (!(lhs <= rhs)) {
        if (violations == 0) detail = what() + ": lhs " + fmt(lhs) + " > rhs " + fmt(rhs);
        ++violations;
    }
}

void AuditResult::record(bool ok, const std::function<std::string()>& what) {
    ++checks;
    if (!ok) {
        if (violations == 0) detail = what();
        ++violations;
    }
}

std::vector<GridDensity> test_densities(std::size_t m, std::uint64_t seed) {
    using namespace observables;
    std::vector<GridDensity> out;
    out.push_back(exp_cos_density(m, 0.3));
    out.push_back(exp_cos_density(m, 1.0));
    out.push_back(exp_cos_density(m, 2.0));
    // Not of period 1/w: such densities make the log-contraction an equality
    // on linear maps, and then interpolation error decides the comparison.
    out.push_back(GridDensity::sample(
        m, [](double x) { return std::exp(0.4 * std::cos(kTwoPi * x) + 0.3 * std::sin(2 * kTwoPi * x)); }));
    out.push_back(GridDensity::sample(m, [](double x) { return 1.0 + 0.5 * std::cos(kTwoPi * x); }));
    for (std::uint64_t i = 0; i < 3; ++i) out.push_back(random_density(m, seed + i, 0.8));
    return out;
}

AuditResult map_properties(const ExpandingMap& map, std::uint64_t seed, std::size_t samples) {
    AuditResult r = make(named(map, "map.expansion_and_regularity"));
    CounterRng rng(seed, 1);
    const double lam = map.lambda();
    for (std::size_t s = 0; s < samples; ++s) {
        const double x = rng.uniform();
        r.record(lam, map.derivative(x), [&] { return "derivative below lambda at x = " + fmt(x); });
        const double y = rng.uniform();
        const double dxy = circle_distance(x, y);
        r.record(distance(map.evaluate(CirclePoint(x)), map.evaluate(CirclePoint(y))), map.d1_sup() * dxy + 1e-14,
                 [&] { return "Lipschitz bound failed for x = " + fmt(x) + ", y = " + fmt(y); });
    }
    // Arcs pulled back through one branch: |T(J)| >= lambda |J|.
    for (std::size_t s = 0; s < samples / 10; ++s) {
        const double x0 = rng.uniform();
        const double len = 0.95 * rng.uniform();
        const double y0 = branch_preimage(map, x0, 0);
        const double y1 = roots::solve_increasing([&](double t) { return map.lift(t); },
                                                  [&](double t) { return map.derivative(t); }, map.lift(y0) + len,
                                                  y0, y0 + len / lam + 1e-12, y0 + len / map.derivative(y0));
        r.record(lam * (y1 - y0), len + 1e-12, [&] { return "arc expansion failed from x = " + fmt(x0); });
    }
    constexpr double h = 1e-5;
    for (std::size_t s = 0; s < 100; ++s) {
        const double x = rng.uniform();
        const double fd = (map.derivative(x + h) - map.derivative(x - h)) / (2 * h);
        r.record(std::abs(fd - map.second_derivative(x)), 1e-5,
                 [&] { return "second derivative disagrees with finite difference at x = " + fmt(x); });
    }
    return r;
}

AuditResult branch_round_trip(const ExpandingMap& map, std::uint64_t seed, std::size_t samples) {
    AuditResult r = make(named(map, "branches.round_trip"));
    CounterRng rng(seed, 2);
    for (std::size_t s = 0; s < samples; ++s) {
        const double x = rng.uniform();
        for_each_branch_pair(map, CirclePoint(x), CirclePoint(x), 6, [&](const BranchPairVisit& v) {
            double z = v.x_pre;
            for (std::size_t k = 0; k < v.path.size(); ++k) z = reduce_mod1(map.lift(z));
            r.record(circle_distance(z, x), 1e-9, [&] { return "round trip drifted from x = " + fmt(x); });
        });
    }
    return r;
}

AuditResult branch_partition(const ExpandingMap& map, std::uint64_t seed, std::size_t samples) {
    AuditResult r = make(named(map, "branches.partition"));
    CounterRng rng(seed, 3);
    for (std::size_t s = 0; s < samples; ++s) {
        const double x = rng.uniform();
        const auto pre = preimages(map, CirclePoint(x));
        double total = 0.0;
        bool ordered = true;
        for (std::size_t i = 0; i < pre.size(); ++i) {
            const double a = pre[i].point.value();
            const double b = pre[(i + 1) % pre.size()].point.value();
            if (i + 1 < pre.size() && !(b > a)) ordered = false;
            total += reduce_mod1(b - a);
        }
        r.record(std::abs(total - 1.0), 1e-9, [&] { return "arc lengths do not sum to 1 at x = " + fmt(x); });
        r.record(ordered, [&] { return "preimages not in branch order at x = " + fmt(x); });
    }
    return r;
}

BranchPairAudit branch_pairs(const ExpandingMap& map, std::uint64_t seed, std::size_t pairs, int max_depth) {
    BranchPairAudit out{make(named(map, "branches.backward_contraction")),
                        make(named(map, "branches.distortion"))};
    CounterRng rng(seed, 4);
    const double omega = regularity_constant(map);
    const double lam = map.lambda();
    for (std::size_t s = 0; s < pairs; ++s) {
        const double x = rng.uniform();
        const double y = reduce_mod1(x + (rng.uniform() - 0.5));
        const double d = circle_distance(x, y);
        const double hi = std::exp(omega * d), lo = std::exp(-omega * d);
        for_each_branch_pair(map, CirclePoint(x), CirclePoint(y), max_depth, [&](const BranchPairVisit& v) {
            const int depth = static_cast<int>(v.path.size());
            auto where = [&] { return "pair x = " + fmt(x) + ", y = " + fmt(y) + ", depth " + std::to_string(depth); };
            out.contraction.record(v.separation, std::pow(lam, -depth) * d + 1e-10, where);
            const double ratio = std::exp(v.log_ratio);
            out.distortion.record(ratio, hi + 1e-9, where);
            out.distortion.record(lo - 1e-9, ratio, where);
        });
    }
    return out;
}

AuditResult grid_properties(std::uint64_t seed, std::size_t m) {
    using observables::random_lipschitz;
    AuditResult r = make("grid.quadrature_metric_holder");
    CounterRng rng(seed, 5);
    for (std::uint64_t t = 0; t < 20; ++t) {
        const GridFunction f = random_lipschitz(m, seed + 3 * t);
        const GridFunction g = random_lipschitz(m, seed + 3 * t + 1);
        const GridFunction h = random_lipschitz(m, seed + 3 * t + 2);
        const double a = 2 * rng.uniform() - 1, b = 2 * rng.uniform() - 1;
        r.record(std::abs(integrate(f * a + g * b) - (a * integrate(f) + b * integrate(g))), 1e-13,
                 [] { return "integrate is not linear"; });
        GridFunction above = f + GridFunction::sample(m, [](double x) { return std::abs(std::sin(7 * x)); });
        r.record(integrate(f), integrate(above), [] { return "integrate is not monotone"; });
        r.record(l1_distance(f, h), l1_distance(f, g) + l1_distance(g, h), [] { return "triangle inequality"; });

        const GridFunction q = dyadic(f);
        for (double alpha : kSweepAlphas) {
            const double base = holder_coefficient(q, alpha);
            for (double c : {-2.0, 0.25, 8.0}) {
                r.record(holder_coefficient(q * c, alpha) == std::abs(c) * base,
                         [&] { return "Hoelder scaling is not exact for c = " + fmt(c); });
            }
            r.record(holder_coefficient(q + 3.0, alpha) == base, [] { return "Hoelder shift is not exact"; });
        }
    }
    // x (1 - x) e^x has periodic values but a derivative jump at 0, so the
    // node mean converges at exactly second order.
    auto f = [](double x) { return x * (1.0 - x) * std::exp(x); };
    const double i1 = integrate(GridFunction::sample(512, f));
    const double i2 = integrate(GridFunction::sample(1024, f));
    const double i3 = integrate(GridFunction::sample(2048, f));
    const double ratio = (i1 - i2) / (i2 - i3);
    r.record(ratio >= 2.5 && ratio <= 6.0, [&] { return "refinement ratio " + fmt(ratio) + " outside [2.5, 6]"; });
    return r;
}

OperatorIdentityAudit operator_identities(const TransferOperator& op, std::uint64_t seed, std::size_t count) {
    const ExpandingMap& map = op.map();
    OperatorIdentityAudit out{make(named(map, "operator.mass_conservation")),
                              make(named(map, "operator.positivity")),
                              make(named(map, "operator.l1_contraction"))};
    const std::size_t m = op.resolution();
    CounterRng rng(seed, 6);
    for (std::size_t i = 0; i < count; ++i) {
        const GridDensity psi = observables::random_density(m, seed + 1000 + i, 0.25 + 1.75 * rng.uniform());
        const GridFunction out_psi = op.apply(psi.function());
        out.mass.record(std::abs(integrate(out_psi) - integrate(psi)), 1e-10,
                        [&] { return "mass drift for density #" + std::to_string(i); });

        const GridFunction rough = rough_nonnegative(m, rng);
        out.positivity.record(inf_value(op.apply(rough)) >= 0.0 && inf_value(out_psi) >= 0.0,
                              [&] { return "negative output for nonnegative input #" + std::to_string(i); });

        const GridFunction u = observables::random_lipschitz(m, seed + 5000 + i) + (rng.uniform() - 0.5);
        out.l1_contraction.record(l1_norm(op.apply(u)), l1_norm(u) + 1e-10,
                                  [&] { return "L1 norm grew for signed input #" + std::to_string(i); });
    }
    return out;
}

AuditResult duality(const TransferOperator& op, std::uint64_t seed, std::size_t count) {
    AuditResult r = make(named(op.map(), "operator.duality"));
    const std::size_t m = op.resolution();
    for (std::size_t i = 0; i < count; ++i) {
        const GridFunction f = observables::random_lipschitz(m, seed + 7000 + i);
        const GridFunction g = observables::random_lipschitz(m, seed + 8000 + i);
        const GridFunction fT = GridFunction::sample(m, [&](double x) { return f(op.map().lift(x)); });
        const double lhs = std::abs(integrate(fT * g) - integrate(f * op.apply(g)));
        r.record(lhs, 5e-3 * sup_norm(f) * sup_norm(g), [&] { return "duality pair #" + std::to_string(i); });
    }
    return r;
}

HolderSweepAudit holder_sweeps(const TransferOperator& op, const std::vector<GridDensity>& densities,
                               const std::vector<double>& alphas, int n_max) {
    const ExpandingMap& map = op.map();
    HolderSweepAudit out{make(named(map, "operator.holder_log_contraction")),
                         make(named(map, "iterates.holder_cap")), make(named(map, "iterates.floor")),
                         make(named(map, "iterates.class_floor"))};
    const double lam = map.lambda();
    const double omega = regularity_constant(map);
    struct Plan {
        double alpha, h_log0, cap, floor, class_floor;
        int n1, n_class;
    };
    for (std::size_t di = 0; di < densities.size(); ++di) {
        const GridDensity& psi = densities[di];
        std::vector<Plan> plans;
        int horizon = n_max;
        for (double alpha : alphas) {
            const ConstantsLedger ledger = compute_ledger(map, alpha);
            const double h0 = holder_coefficient(psi, alpha);
            Plan p;
            p.alpha = alpha;
            p.h_log0 = holder_coefficient(log_transform(psi), alpha);
            p.cap = (h0 / std::pow(lam, alpha) + std::expm1(omega) * (h0 + 1.0)) * (1.0 + omega);
            const double L = std::max(h0, p.cap);
            p.n1 = std::max(1, 1 + static_cast<int>(std::ceil(std::log(2.0 * L) / (alpha * std::log(lam)))));
            p.floor = 0.5 * std::pow(map.d1_sup(), -p.n1);
            p.n_class = ledger.N_of(p.h_log0);
            p.class_floor = ledger.lower_floor - 1e-9;
            horizon = std::max({horizon, p.n1 + 10, p.n_class + 10});
            plans.push_back(p);
        }
        GridDensity u = psi;
        for (int n = 0; n <= horizon; ++n) {
            if (n > 0) u = op.apply(u);
            const double lo = inf_value(u);
            const GridFunction logu = log_transform(u);
            for (const Plan& p : plans) {
                auto where = [&] {
                    return "density #" + std::to_string(di) + ", alpha " + fmt(p.alpha) + ", n = " + std::to_string(n);
                };
                if (n <= n_max) {
                    out.log_contraction.record(holder_coefficient(logu, p.alpha),
                                               std::pow(lam, -p.alpha * n) * p.h_log0 + omega + 1e-6, where);
                    if (n >= 1) out.iterate_holder_cap.record(holder_coefficient(u, p.alpha), p.cap + 1e-6, where);
                }
                if (n >= p.n1) out.iterate_floor.record(p.floor, lo, where);
                if (n > p.n_class) out.class_floor.record(p.class_floor, lo, where);
            }
        }
    }
    return out;
}

AuditResult invariant_positivity(const GridDensity& phi) {
    AuditResult r = make("invariant.strict_positivity");
    r.record(inf_value(phi) > 0.0, [&] { return "invariant density has inf " + fmt(inf_value(phi)); });
    return r;
}

AuditResult ledger_properties(const ExpandingMap& map) {
    AuditResult r = make(named(map, "constants.ledger_invariants"));
    for (double alpha : kSweepAlphas) {
        const ConstantsLedger l = compute_ledger(map, alpha);
        auto where = [&](const char* what) { return [&, what] { return std::string(what) + " at alpha " + fmt(alpha); }; };
        r.record(l.omega >= 0.0, where("omega < 0"));
        r.record(l.a > 0.0 && l.a <= 0.5, where("a outside (0, 1/2]"));
        r.record(l.K > 1.0, where("K <= 1"));
        r.record(l.theta_exact > 0.0 && l.theta_exact < 1.0, where("theta_exact outside (0, 1)"));
        r.record(l.theta_paper > 0.0 && l.theta_paper < 1.0, where("theta_paper outside (0, 1)"));
        r.record(l.D_exact <= 4.0, where("D_exact > 4"));
        r.record(l.C >= 384.0, where("C < 384"));
        r.record(l.lower_floor == 2.0 * l.a, where("floor differs from 2a"));
        r.record(l.N_of(1.0) == 1 && l.N_of(0.5) == 1, where("N(B) for B <= 1 is not 1"));
        r.record(l.N_K == l.N_of(l.K), where("N_K differs from N(K)"));
    }
    return r;
}

AuditResult omega_monotonicity() {
    AuditResult r = make("constants.omega_monotonicity");
    double prev_omega = -1.0, prev_d2 = -1.0, prev_lambda = 1e300;
    for (int i = 1; i <= 10; ++i) {
        const double eps = 0.01 * i;
        const ExpandingMap map = ExpandingMap::perturbed(2, eps);
        const double omega = regularity_constant(map);
        r.record(map.d2_sup() > prev_d2 && map.lambda() < prev_lambda && omega >= prev_omega,
                 [&] { return "omega not monotone at eps = " + fmt(eps); });
        prev_omega = omega;
        prev_d2 = map.d2_sup();
        prev_lambda = map.lambda();
    }
    return r;
}

ClassAudit class_properties(const TransferOperator& op, const GridDensity& phi, std::uint64_t seed) {
    const ExpandingMap& map = op.map();
    ClassAudit out{make(named(map, "class.holder_from_log")), make(named(map, "class.pointwise_log_bounds")),
                   make(named(map, "class.entry_after_N")), make(named(map, "class.floor_2a")),
                   make(named(map, "class.residual_in_K"))};
    const std::size_t m = op.resolution();
    std::vector<GridDensity> pool = test_densities(m, seed);
    pool.push_back(phi);

    for (const GridDensity& psi : pool) {
        GridDensity u = psi;
        for (int n = 0; n <= 30; ++n) {
            if (n > 0) u = op.apply(u);
            if (n % 5 != 0) continue;
            for (double alpha : kSweepAlphas) {
                const double H = holder_coefficient(log_transform(u), alpha);
                out.holder_from_log.record(holder_coefficient(u, alpha), H * std::exp(H) + 1e-6,
                                           [&] { return "alpha " + fmt(alpha) + ", n = " + std::to_string(n); });
                out.pointwise_log_bounds.record(pointwise_log_bounds_check(u, alpha), [&] {
                    return "log bounds fail at alpha " + fmt(alpha) + ", n = " + std::to_string(n);
                });
            }
        }
    }

    // Largest amplitude exp(A cos 2 pi x) that stays comfortably resolvable.
    constexpr double kResolvableCap = 50.0;
    const GridFunction cos1 = observables::cos_mode(m);
    for (double alpha : {0.5, 1.0}) {
        const ConstantsLedger l = compute_ledger(map, alpha);
        const double unit = holder_coefficient(cos1, alpha);
        for (double B : {5.0, 20.0, l.K}) {
            const double A = std::min(B, kResolvableCap) * (1.0 - 1e-3) / unit;
            const GridDensity psi = observables::exp_cos_density(m, A);
            const int nb = l.N_of(B);
            auto where = [&](int n) {
                return [&, n] { return "B = " + fmt(B) + ", alpha " + fmt(alpha) + ", n = " + std::to_string(n); };
            };
            out.entry.record(hoelder_class_check(psi, B, alpha), where(0));
            GridDensity u = psi;
            for (int n = 1; n <= nb + 10; ++n) {
                u = op.apply(u);
                if (n <= nb) continue;
                const bool in_class = hoelder_class_check(u, l.omega + 1.0, alpha);
                out.entry.record(in_class, where(n));
                if (!in_class) continue;
                out.floor.record(l.lower_floor - 1e-9, inf_value(u), where(n));
                out.residual.record(hoelder_class_check(decompose(u, l.a), l.K, alpha), where(n));
            }
        }
        if (hoelder_class_check(phi, l.omega + 1.0, alpha)) {
            out.floor.record(l.lower_floor - 1e-9, inf_value(phi), [] { return std::string("invariant density"); });
            out.residual.record(hoelder_class_check(decompose(phi, l.a), l.K, alpha),
                                [] { return std::string("invariant density residual"); });
        }
    }
    return out;
}

CouplingAudit coupling(const TransferOperator& op, const GridDensity& phi, double alpha, std::size_t trials,
                       std::uint64_t seed) {
    const ExpandingMap& map = op.map();
    CouplingAudit out{make(named(map, "coupling.deterministic_contraction")),
                      make(named(map, "coupling.monte_carlo"))};
    const ConstantsLedger l = compute_ledger(map, alpha);
    const GridDensity psi1 = observables::exp_cos_density(op.resolution(), 0.3);
    const ContractionRun run = deterministic_contraction_run(op, psi1, phi, alpha, std::max(200, 5 * l.N_K));
    for (const auto& row : run.rows) {
        out.deterministic.record(row.ok, [&] {
            return "n = " + std::to_string(row.n) + ": tv " + fmt(row.tv_true) + ", bound " + fmt(row.bound) +
                   ", reconstruction error " + fmt(row.reconstruction_error);
        });
    }
    const CouplingTrace trace = monte_carlo_coupling(op, psi1, phi, alpha, 5 * l.N_K, trials, seed);
    for (const auto& row : trace.rows) {
        out.monte_carlo.record(row.mismatch_ok && row.coupling_ok, [&] {
            return "n = " + std::to_string(row.n) + ": mismatch " + fmt(row.empirical_mismatch) + ", tv " +
                   fmt(row.tv_true);
        });
    }
    for (const auto& mc : trace.marginals) {
        out.monte_carlo.record(mc.ok, [&] {
            return "marginal chi-square at n = " + std::to_string(mc.n) + ": p = " + fmt(mc.p_x) + ", " + fmt(mc.p_y);
        });
    }
    return out;
}

CorrelationAudit correlation_sweep(const TransferOperator& op, const GridDensity& phi, std::uint64_t seed,
                                   const std::vector<double>& alphas, int n_max) {
    using namespace observables;
    const ExpandingMap& map = op.map();
    CorrelationAudit out{make(named(map, "correlation.main_bound")), make(named(map, "correlation.reduction_chain")),
                         make(named(map, "correlation.bilinearity")), make(named(map, "correlation.invariance"))};
    const std::size_t m = op.resolution();
    const std::vector<std::pair<std::string, GridFunction>> fs = {
        {"cos", cos_mode(m)}, {"step", smoothed_step(m)}, {"random", random_lipschitz(m, seed)}};
    for (double alpha : alphas) {
        const std::vector<std::pair<std::string, GridFunction>> gs = {{"cos", cos_mode(m)},
                                                                      {"distance", distance_power(m, alpha)}};
        for (const auto& [fname, f] : fs) {
            for (const auto& [gname, g] : gs) {
                const DecayReport rep = decay_report(op, phi, f, g, alpha, n_max);
                for (const auto& row : rep.rows) {
                    auto where = [&] {
                        return "f = " + fname + ", g = " + gname + ", alpha " + fmt(alpha) + ", n = " +
                               std::to_string(row.n);
                    };
                    out.main_bound.record(std::abs(row.corr), row.bound + 1e-9, where);
                    out.reduction.record(std::abs(row.corr), row.reduction + 1e-8, where);
                    out.reduction.record(row.reduction, row.bound + 1e-9, where);
                }
            }
        }
    }

    const GridFunction f1 = random_lipschitz(m, seed + 11), f2 = smoothed_step(m);
    const GridFunction g1 = cos_mode(m), g2 = random_lipschitz(m, seed + 12);
    const double a = 0.7, b = -1.3;
    const int nb = std::min(n_max, 10);
    const auto c11 = correlation_series(op, phi, f1, g1, nb);
    const auto c21 = correlation_series(op, phi, f2, g1, nb);
    const auto c12 = correlation_series(op, phi, f1, g2, nb);
    const auto cf = correlation_series(op, phi, f1 * a + f2 * b, g1, nb);
    const auto cg = correlation_series(op, phi, f1, g1 * a + g2 * b, nb);
    const auto one = correlation_series(op, phi, GridFunction::constant(m, 1.0), g2, n_max);
    for (int n = 0; n <= nb; ++n) {
        const auto i = static_cast<std::size_t>(n);
        auto where = [&] { return "n = " + std::to_string(n); };
        out.bilinearity.record(std::abs(cf[i] - (a * c11[i] + b * c21[i])), 1e-10, where);
        out.bilinearity.record(std::abs(cg[i] - (a * c11[i] + b * c12[i])), 1e-10, where);
    }
    for (std::size_t i = 0; i < one.size(); ++i) {
        out.invariance.record(std::abs(one[i]), 1e-10 * sup_norm(g2),
                              [&] { return "f = 1 correlation at n = " + std::to_string(i); });
    }
    return out;
}

AuditResult density_convergence(const TransferOperator& op, const GridDensity& phi,
                                const std::vector<GridDensity>& densities, const std::vector<double>& alphas,
                                int n_max) {
    AuditResult r = make(named(op.map(), "convergence.density_bound"));
    for (std::size_t di = 0; di < densities.size(); ++di) {
        for (double alpha : alphas) {
            const ConvergenceReport rep = density_convergence_report(op, phi, densities[di], alpha, n_max);
            for (const auto& row : rep.rows) {
                r.record(row.l1_err, row.bound + 1e-8, [&] {
                    return "density #" + std::to_string(di) + ", alpha " + fmt(alpha) + ", n = " + std::to_string(row.n);
                });
            }
        }
    }
    return r;
}

AuditResult uniqueness(const TransferOperator& op, double tolerance) {
    AuditResult r = make(named(op.map(), "invariant.uniqueness"));
    const std::size_t m = op.resolution();
    const GridDensity s1 = observables::exp_cos_density(m, 0.3);
    const GridDensity s2 = observables::random_density(m, 7, 0.5);
    const auto p1 = invariant_density(op, s1, kInvariantTolerance, kInvariantMaxIterations);
    const auto p2 = invariant_density(op, s2, kInvariantTolerance, kInvariantMaxIterations);
    r.record(l1_distance(p1.density, p2.density), tolerance, [] { return std::string("invariant densities differ"); });
    return r;
}

std::vector<AuditResult> run_all(const ExpandingMap& map, const RunOptions& o) {
    const TransferOperator op(map, o.resolution);
    const InvariantDensityResult inv = invariant_density(op);
    const std::vector<GridDensity> densities = test_densities(o.resolution, o.seed);
    const std::size_t mid = std::max(o.resolution, o.identity_resolution);
    const TransferOperator fine(map, mid);
    const GridDensity phi_fine = mid == o.resolution ? inv.density : invariant_density(fine).density;

    std::vector<AuditResult> out;
    out.push_back(map_properties(map, o.seed));
    out.push_back(branch_round_trip(map, o.seed));
    out.push_back(branch_partition(map, o.seed));
    auto pairs = branch_pairs(map, o.seed);
    out.push_back(std::move(pairs.contraction));
    out.push_back(std::move(pairs.distortion));
    out.push_back(grid_properties(o.seed, o.resolution));
    auto ids = operator_identities(fine, o.seed);
    out.push_back(std::move(ids.mass));
    out.push_back(std::move(ids.positivity));
    out.push_back(std::move(ids.l1_contraction));
    out.push_back(duality(op, o.seed));
    auto sweeps = holder_sweeps(op, densities);
    out.push_back(std::move(sweeps.log_contraction));
    out.push_back(std::move(sweeps.iterate_holder_cap));
    out.push_back(std::move(sweeps.iterate_floor));
    out.push_back(std::move(sweeps.class_floor));
    out.push_back(invariant_positivity(inv.density));
    out.push_back(ledger_properties(map));
    out.push_back(omega_monotonicity());
    auto cls = class_properties(op, inv.density, o.seed);
    out.push_back(std::move(cls.holder_from_log));
    out.push_back(std::move(cls.pointwise_log_bounds));
    out.push_back(std::move(cls.entry));
    out.push_back(std::move(cls.floor));
    out.push_back(std::move(cls.residual));
    auto cpl = coupling(op, inv.density, o.alpha, o.trials, o.seed);
    out.push_back(std::move(cpl.deterministic));
    out.push_back(std::move(cpl.monte_carlo));
    auto corr = correlation_sweep(op, inv.density, o.seed, kSweepAlphas, o.n_max);
    out.push_back(std::move(corr.main_bound));
    auto corr_fine = correlation_sweep(fine, phi_fine, o.seed, kSweepAlphas, o.n_max);
    out.push_back(std::move(corr_fine.reduction));
    out.push_back(std::move(corr_fine.bilinearity));
    out.push_back(std::move(corr_fine.invariance));
    out.push_back(density_convergence(op, inv.density, densities));
    out.push_back(uniqueness(op));
    return out;
}

}  // namespace expcircle::audit
