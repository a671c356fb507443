#include "expcircle/correlation_suite.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "expcircle/errors.hpp"

namespace expcircle {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_invariant(const TransferOperator& op, const GridDensity& phi) {
    const double r = l1_distance(op.apply(phi.function()), phi.function());
    if (!(r < kInvarianceTolerance)) {
        throw NotInvariant("density is not invariant: ||L phi - phi||_1 = " + fmt17(r));
    }
}

double fit_rate(const std::vector<DecayRow>& rows) {
    double sn = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
        if (std::abs(r.corr) <= 1e-12) continue;
        const double x = r.n, y = std::log(std::abs(r.corr));
        sn += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = sn * sxx - sx * sx;
    if (sn < 2 || den == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (sn * sxy - sx * sy) / den;
}

}  // namespace

std::vector<double> correlation_series(const TransferOperator& op, const GridDensity& phi, const GridFunction& f,
                                       const GridFunction& g, int n_max) {
    if (n_max < 0) throw InvalidArgument("correlation step must be >= 0");
    require_invariant(op, phi);
    const GridFunction gphi = g * phi.function();
    const double mean = integrate(f * phi.function()) * integrate(gphi);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    GridFunction u = gphi;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) u = op.apply(u);
        out.push_back(integrate(f * u) - mean);
    }
    return out;
}

double correlation(const TransferOperator& op, const GridDensity& phi, const GridFunction& f, const GridFunction& g,
                   int n) {
    return correlation_series(op, phi, f, g, n).back();
}

GridDensity normalized_observable_density(const GridFunction& g, const GridDensity& phi) {
    const double gs = sup_norm(g);
    if (!(gs > 0.0)) throw ZeroObservable("observable vanishes identically");
    const double denom = integrate(g * phi.function()) + 2.0 * gs;
    return GridDensity::normalize(phi.function() * (g + 2.0 * gs) * (1.0 / denom));
}

DecayReport decay_report(const TransferOperator& op, const GridFunction& f, const GridFunction& g, double alpha,
                         int n_max) {
    return decay_report(op, invariant_density(op).density, f, g, alpha, n_max);
}

DecayReport decay_report(const TransferOperator& op, const GridDensity& phi, const GridFunction& f,
                         const GridFunction& g, double alpha, int n_max) {
    DecayReport rep;
    rep.ledger = compute_ledger(op.map(), alpha);
    rep.f_sup = sup_norm(f);
    rep.g_sup = sup_norm(g);
    rep.g_holder = holder_coefficient(g, alpha);
    const std::vector<double> corr = correlation_series(op, phi, f, g, n_max);

    // The reduction compares against L^n psi for the observable density psi.
    // psi is iterated without renormalization so that it stays an exact
    // linear combination of the iterates of g phi and phi.
    const bool have_psi = rep.g_sup > 0.0;
    GridFunction psi = have_psi ? normalized_observable_density(g, phi).function() : phi.function();
    const double scale = rep.ledger.C * rep.f_sup * (rep.g_sup + rep.g_holder);
    bool all_ok = true, all_reduction = true;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0 && have_psi) psi = op.apply(psi);
        DecayRow row;
        row.n = n;
        row.corr = corr[static_cast<std::size_t>(n)];
        row.bound = scale * std::pow(rep.ledger.theta_paper, alpha * n);
        row.reduction = 3.0 * rep.g_sup * rep.f_sup * (have_psi ? l1_distance(psi, phi.function()) : 0.0);
        row.ok = std::abs(row.corr) <= row.bound + 1e-9;
        row.reduction_ok = std::abs(row.corr) <= row.reduction + 1e-8;
        row.chain_ok = row.reduction <= row.bound + 1e-9;
        all_ok = all_ok && row.ok;
        all_reduction = all_reduction && row.reduction_ok && row.chain_ok;
        rep.rows.push_back(row);
        if (std::abs(row.corr) < 1e-14 && row.bound < 1e-14) break;
    }
    rep.fitted_rate = fit_rate(rep.rows);
    rep.ok = all_ok;
    rep.reduction_ok = all_reduction;
    return rep;
}

std::string DecayReport::to_csv() const {
    std::ostringstream os;
    os << "n,corr,bound,ok\n";
    for (const auto& r : rows) os << r.n << ',' << fmt17(r.corr) << ',' << fmt17(r.bound) << ',' << (r.ok ? 1 : 0) << '\n';
    return os.str();
}

std::string DecayReport::to_json() const {
    nlohmann::json j;
    j["ledger"] = nlohmann::json::parse(ledger.to_json());
    j["f_sup"] = f_sup;
    j["g_sup"] = g_sup;
    j["g_holder"] = g_holder;
    j["fitted_rate"] = std::isfinite(fitted_rate) ? nlohmann::json(fitted_rate) : nlohmann::json(nullptr);
    j["ok"] = ok;
    j["reduction_ok"] = reduction_ok;
    j["note"] = "norms and Hoelder constants are grid estimates";
    auto& rs = j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        rs.push_back({{"n", r.n},
                      {"corr", r.corr},
                      {"bound", r.bound},
                      {"reduction", r.reduction},
                      {"ok", r.ok},
                      {"reduction_ok", r.reduction_ok},
                      {"chain_ok", r.chain_ok}});
    }
    return j.dump(2);
}

ConvergenceReport density_convergence_report(const TransferOperator& op, const GridDensity& psi, double alpha,
                                             int n_max) {
    return density_convergence_report(op, invariant_density(op).density, psi, alpha, n_max);
}

ConvergenceReport density_convergence_report(const TransferOperator& op, const GridDensity& phi,
                                             const GridDensity& psi, double alpha, int n_max) {
    if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
    const ConstantsLedger ledger = compute_ledger(op.map(), alpha);
    ConvergenceReport rep;
    rep.psi_holder = holder_coefficient(psi, alpha);
    const double scale = ledger.D_tilde * (1.0 + rep.psi_holder);
    GridDensity u = psi;
    bool all_ok = true;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) u = op.apply(u);
        ConvergenceRow row;
        row.n = n;
        row.l1_err = l1_distance(u, phi);
        row.bound = scale * std::pow(ledger.theta_paper, alpha * n);
        row.ok = row.l1_err <= row.bound + 1e-8;
        all_ok = all_ok && row.ok;
        rep.rows.push_back(row);
    }
    rep.ok = all_ok;
    return rep;
}

}  // namespace expcircle
