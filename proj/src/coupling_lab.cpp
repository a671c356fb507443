#include "expcircle/coupling_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <json.hpp>

#include "expcircle/errors.hpp"
#include "expcircle/parallel.hpp"

namespace expcircle {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_class(const GridDensity& psi, const CouplingParameters& p, const char* which) {
    if (!hoelder_class_check(psi, p.K, p.alpha)) {
        throw InvalidArgument(std::string(which) + " is not in the Hoelder-log class with cap K = " + fmt17(p.K));
    }
}

void require_params(const CouplingParameters& p) {
    if (!(p.a > 0.0 && p.a < 1.0)) throw InvalidArgument("regeneration weight must lie in (0, 1)");
    if (p.block < 1) throw InvalidArgument("regeneration block length must be >= 1");
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw InvalidAlpha("alpha must lie in (0, 1]");
}

GridDensity decompose_at(const GridDensity& psi, double a, int k, int n, const char* which) {
    try {
        return decompose(psi, a);
    } catch (const FloorViolation& e) {
        throw FloorViolation(std::string(e.what()) + " (" + which + ", epoch k = " + std::to_string(k) +
                             ", n = " + std::to_string(n) + "; the residual did not re-enter the floor class)");
    }
}

// Mixture of the regenerated and surviving parts after epoch k.
GridFunction reconstruct(const GridDensity& rho, const GridDensity& residual, double survive) {
    return rho.function() * (1.0 - survive) + residual.function() * survive;
}

std::vector<double> bin_probabilities(const GridDensity& psi) {
    std::vector<double> p(kMarginalBins);
    const double width = 1.0 / static_cast<double>(kMarginalBins);
    for (std::size_t b = 0; b < kMarginalBins; ++b) {
        p[b] = integrate_interval(psi, static_cast<double>(b) * width, static_cast<double>(b + 1) * width);
    }
    return p;
}

std::size_t bin_of(double x) {
    return std::min(kMarginalBins - 1, static_cast<std::size_t>(x * static_cast<double>(kMarginalBins)));
}

// One step of the flow. Powers of two shift a bit out of the mantissa on every
// step, so a jitter below two ulps keeps the low bits random; in law this is
// the same as having drawn the starting point to more digits.
double flow(const ExpandingMap& map, double x, CounterRng& rng) {
    return reduce_mod1(map.lift(x) + rng.uniform() * 0x1p-52);
}

}  // namespace

GridDensity decompose(const GridDensity& psi, double a) {
    if (!(a >= 0.0 && a < 1.0)) throw InvalidArgument("regeneration weight must lie in [0, 1)");
    const double lo = inf_value(psi);
    if (lo < a) {
        throw FloorViolation("density infimum " + fmt17(lo) + " is below the regeneration weight " + fmt17(a));
    }
    std::vector<double> v(psi.resolution());
    const double scale = 1.0 / (1.0 - a);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = (psi[j] - a) * scale;
    return GridDensity::normalize(GridFunction(std::move(v)));
}

CouplingParameters CouplingParameters::from_ledger(const ConstantsLedger& l) {
    CouplingParameters p;
    p.alpha = l.alpha;
    p.a = l.a;
    p.block = l.N_K;
    p.D_exact = l.D_exact;
    p.theta_exact = l.theta_exact;
    p.K = l.K;
    return p;
}

ContractionRun deterministic_contraction_run(const TransferOperator& op, const GridDensity& psi1,
                                             const GridDensity& psi2, double alpha, int n_max) {
    return deterministic_contraction_run(op, psi1, psi2,
                                         CouplingParameters::from_ledger(compute_ledger(op.map(), alpha)), n_max);
}

ContractionRun deterministic_contraction_run(const TransferOperator& op, const GridDensity& psi1,
                                             const GridDensity& psi2, const CouplingParameters& p, int n_max) {
    require_params(p);
    if (n_max < p.block) throw InvalidArgument("n_max must be at least one regeneration block");
    require_class(psi1, p, "psi1");
    require_class(psi2, p, "psi2");

    ContractionRun run;
    run.params = p;
    run.rows.reserve(static_cast<std::size_t>(n_max) + 1);
    GridDensity truth1 = psi1, truth2 = psi2;
    GridDensity res1 = psi1, res2 = psi2;
    GridDensity rho = GridDensity::uniform(op.resolution());
    const GridFunction one = GridFunction::constant(op.resolution(), 1.0);
    int k = 0;
    double survive = 1.0;  // (1 - a)^k
    bool all_ok = true;

    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) {
            truth1 = op.apply(truth1);
            truth2 = op.apply(truth2);
            res1 = op.apply(res1);
            res2 = op.apply(res2);
            if (k > 0) rho = op.apply(rho);
            if (n % p.block == 0) {
                ++k;
                res1 = decompose_at(res1, p.a, k, n, "psi1");
                res2 = decompose_at(res2, p.a, k, n, "psi2");
                const double before = survive;
                survive *= 1.0 - p.a;
                const GridFunction mixed = rho.function() * (1.0 - before) + one * (before * p.a);
                rho = GridDensity::normalize(mixed);
            }
        }
        ContractionRow row;
        row.n = n;
        row.k = k;
        row.tv_true = l1_distance(truth1, truth2);
        row.bound = 2.0 * std::pow(1.0 - p.a, k);
        row.envelope = 2.0 * std::pow(1.0 - p.a, static_cast<double>(n) / p.block - 1.0);
        row.reconstruction_error = std::max(l1_distance(reconstruct(rho, res1, survive), truth1),
                                            l1_distance(reconstruct(rho, res2, survive), truth2));
        row.ok = row.tv_true <= row.bound + kContractionSlack && row.tv_true <= row.envelope + kContractionSlack &&
                 row.reconstruction_error <= kReconstructionTolerance;
        all_ok = all_ok && row.ok;
        run.rows.push_back(row);
    }
    run.ok = all_ok;
    return run;
}

ChiSquare chi_square_test(const std::vector<std::uint64_t>& observed, const std::vector<double>& probabilities) {
    if (observed.size() != probabilities.size() || observed.size() < 2) {
        throw InvalidArgument("chi-square test needs matching bins (at least two)");
    }
    double total = 0.0;
    for (auto o : observed) total += static_cast<double>(o);
    double pmass = 0.0;
    for (double q : probabilities) pmass += q;
    ChiSquare r;
    for (std::size_t b = 0; b < observed.size(); ++b) {
        const double expected = total * probabilities[b] / pmass;
        if (!(expected > 0.0)) throw InvalidArgument("chi-square bin with zero expected count");
        const double diff = static_cast<double>(observed[b]) - expected;
        r.statistic += diff * diff / expected;
    }
    const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    return r;
}

CouplingTrace monte_carlo_coupling(const TransferOperator& op, const GridDensity& psi1, const GridDensity& psi2,
                                   double alpha, int n_max, std::size_t trials, std::uint64_t seed) {
    return monte_carlo_coupling(op, psi1, psi2, CouplingParameters::from_ledger(compute_ledger(op.map(), alpha)),
                                n_max, trials, seed);
}

CouplingTrace monte_carlo_coupling(const TransferOperator& op, const GridDensity& psi1, const GridDensity& psi2,
                                   const CouplingParameters& p, int n_max, std::size_t trials, std::uint64_t seed) {
    require_params(p);
    if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
    if (trials < kMinTrials) throw InvalidArgument("Monte Carlo coupling needs at least 10000 trials");
    require_class(psi1, p, "psi1");
    require_class(psi2, p, "psi2");

    const auto steps = static_cast<std::size_t>(n_max) + 1;
    const int epochs = n_max / p.block;

    // Deterministic side: marginals, the true distance, and the residual
    // densities that tails draws are taken from.
    std::vector<double> tv(steps);
    std::vector<int> check_steps;
    std::vector<std::vector<double>> probs_x, probs_y;
    std::vector<DensitySampler> residual1, residual2;
    residual1.reserve(static_cast<std::size_t>(epochs) + 1);
    residual2.reserve(static_cast<std::size_t>(epochs) + 1);
    residual1.emplace_back(psi1);
    residual2.emplace_back(psi2);
    {
        GridDensity truth1 = psi1, truth2 = psi2, res1 = psi1, res2 = psi2;
        for (int n = 0; n <= n_max; ++n) {
            if (n > 0) {
                truth1 = op.apply(truth1);
                truth2 = op.apply(truth2);
                res1 = op.apply(res1);
                res2 = op.apply(res2);
                if (n % p.block == 0) {
                    const int k = n / p.block;
                    res1 = decompose_at(res1, p.a, k, n, "psi1");
                    res2 = decompose_at(res2, p.a, k, n, "psi2");
                    residual1.emplace_back(res1);
                    residual2.emplace_back(res2);
                }
            }
            tv[static_cast<std::size_t>(n)] = l1_distance(truth1, truth2);
            if (n % p.block == 0 || n == n_max) {
                check_steps.push_back(n);
                probs_x.push_back(bin_probabilities(truth1));
                probs_y.push_back(bin_probabilities(truth2));
            }
        }
    }
    std::vector<int> check_index(steps, -1);
    for (std::size_t c = 0; c < check_steps.size(); ++c) check_index[static_cast<std::size_t>(check_steps[c])] = static_cast<int>(c);

    CouplingTrace trace;
    trace.params = p;
    trace.seed = seed;
    trace.trials = trials;
    trace.merge_epoch.assign(trials, 0);

    std::vector<std::uint64_t> mismatches(steps, 0);
    const std::size_t nchecks = check_steps.size();
    std::vector<std::uint64_t> hist_x(nchecks * kMarginalBins, 0), hist_y(nchecks * kMarginalBins, 0);
    std::mutex merge_mutex;
    const ExpandingMap& map = op.map();

    parallel::for_range(trials, [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint64_t> local_mis(steps, 0);
        std::vector<std::uint64_t> local_x(hist_x.size(), 0), local_y(hist_y.size(), 0);
        for (std::size_t t = begin; t < end; ++t) {
            CounterRng rng(seed, t);
            double x = residual1[0].draw(rng);
            double y = residual2[0].draw(rng);
            bool merged = false;
            for (int n = 0; n <= n_max; ++n) {
                if (n > 0) {
                    x = flow(map, x, rng);
                    y = merged ? x : flow(map, y, rng);
                    if (!merged && n % p.block == 0) {
                        const int k = n / p.block;
                        if (rng.uniform() < p.a) {
                            x = y = rng.uniform();
                            merged = true;
                            trace.merge_epoch[t] = k;
                        } else {
                            x = residual1[static_cast<std::size_t>(k)].draw(rng);
                            y = residual2[static_cast<std::size_t>(k)].draw(rng);
                        }
                    }
                }
                const auto sn = static_cast<std::size_t>(n);
                if (x != y) ++local_mis[sn];
                if (const int c = check_index[sn]; c >= 0) {
                    ++local_x[static_cast<std::size_t>(c) * kMarginalBins + bin_of(x)];
                    ++local_y[static_cast<std::size_t>(c) * kMarginalBins + bin_of(y)];
                }
            }
        }
        // Integer counts, so the reduction order cannot change the result.
        std::lock_guard lock(merge_mutex);
        for (std::size_t i = 0; i < steps; ++i) mismatches[i] += local_mis[i];
        for (std::size_t i = 0; i < hist_x.size(); ++i) {
            hist_x[i] += local_x[i];
            hist_y[i] += local_y[i];
        }
    });

    const double tol = 5.0 / std::sqrt(static_cast<double>(trials));
    bool all_ok = true;
    trace.rows.reserve(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        CouplingRow row;
        row.n = static_cast<int>(n);
        row.k = row.n / p.block;
        row.tv_true = tv[n];
        row.empirical_mismatch = static_cast<double>(mismatches[n]) / static_cast<double>(trials);
        row.bound_coupling = 2.0 * std::pow(1.0 - p.a, row.k);
        row.bound_theta = p.D_exact * std::pow(p.theta_exact, p.alpha * static_cast<double>(n));
        row.mismatch_ok = row.empirical_mismatch <= std::pow(1.0 - p.a, row.k) + tol;
        row.coupling_ok = row.tv_true <= 2.0 * row.empirical_mismatch + tol;
        all_ok = all_ok && row.mismatch_ok && row.coupling_ok;
        trace.rows.push_back(row);
    }
    for (std::size_t c = 0; c < nchecks; ++c) {
        const std::vector<std::uint64_t> ox(hist_x.begin() + static_cast<std::ptrdiff_t>(c * kMarginalBins),
                                            hist_x.begin() + static_cast<std::ptrdiff_t>((c + 1) * kMarginalBins));
        const std::vector<std::uint64_t> oy(hist_y.begin() + static_cast<std::ptrdiff_t>(c * kMarginalBins),
                                            hist_y.begin() + static_cast<std::ptrdiff_t>((c + 1) * kMarginalBins));
        const ChiSquare cx = chi_square_test(ox, probs_x[c]);
        const ChiSquare cy = chi_square_test(oy, probs_y[c]);
        MarginalCheck m;
        m.n = check_steps[c];
        m.chi2_x = cx.statistic;
        m.chi2_y = cy.statistic;
        m.p_x = cx.p_value;
        m.p_y = cy.p_value;
        m.ok = m.p_x > kMarginalPValue && m.p_y > kMarginalPValue;
        all_ok = all_ok && m.ok;
        trace.marginals.push_back(m);
    }
    trace.ok = all_ok;
    return trace;
}

std::string CouplingTrace::to_csv() const {
    std::ostringstream os;
    os << "n,k,tv_true,empirical_mismatch,bound_coupling,bound_theta\n";
    for (const auto& r : rows) {
        os << r.n << ',' << r.k << ',' << fmt17(r.tv_true) << ',' << fmt17(r.empirical_mismatch) << ','
           << fmt17(r.bound_coupling) << ',' << fmt17(r.bound_theta) << '\n';
    }
    return os.str();
}

std::string CouplingTrace::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["trials"] = trials;
    j["a"] = params.a;
    j["block"] = params.block;
    j["alpha"] = params.alpha;
    j["D_exact"] = params.D_exact;
    j["theta_exact"] = params.theta_exact;
    j["ok"] = ok;
    auto& rs = j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        rs.push_back({{"n", r.n},
                      {"k", r.k},
                      {"tv_true", r.tv_true},
                      {"empirical_mismatch", r.empirical_mismatch},
                      {"bound_coupling", r.bound_coupling},
                      {"bound_theta", r.bound_theta},
                      {"mismatch_ok", r.mismatch_ok},
                      {"coupling_ok", r.coupling_ok}});
    }
    auto& ms = j["marginals"] = nlohmann::json::array();
    for (const auto& m : marginals) {
        ms.push_back({{"n", m.n}, {"chi2_x", m.chi2_x}, {"chi2_y", m.chi2_y}, {"p_x", m.p_x}, {"p_y", m.p_y},
                      {"ok", m.ok}});
    }
    std::uint64_t merged = 0;
    for (int e : merge_epoch) merged += e > 0 ? 1 : 0;
    j["merged_trials"] = merged;
    return j.dump(2);
}

}  // namespace expcircle
