// One PASS/FAIL line per acceptance criterion, each run at the default
// resolution M = 4096. Exits nonzero if any criterion fails. With
// `--criterion N` only criterion N runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "expcircle/correlation_suite.hpp"
#include "expcircle/coupling_lab.hpp"
#include "expcircle/diagnostics.hpp"
#include "expcircle/observables.hpp"
#include "expcircle/system_constants.hpp"
#include "expcircle/transfer_operator.hpp"
#include "expcircle/verification.hpp"

using namespace expcircle;

namespace {

constexpr std::size_t kM = kDefaultResolution;
constexpr std::uint64_t kSeed = 42;

struct Outcome {
    bool pass = false;
    std::string detail;
    std::vector<std::string> notes;
};

// Criteria whose 1e-10 tolerance is below the O(M^-2) linear-interpolation
// error at M = 4096. A failure prints the measured explanation as well.
const std::map<int, const char*> kKnownLimitations = {
    {3, "mass drift of the interpolated pullback is O(M^-2) on perturbed maps, about 1e-9 at M = 4096"},
    {4, "halving 1 + 0.5 cos 4 pi x reads the interpolant at cell midpoints; error 0.5 (1 - cos(2 pi / M)) = 5.9e-7"},
};

std::vector<ExpandingMap> test_maps() {
    return {ExpandingMap::linear(2), ExpandingMap::linear(3), ExpandingMap::perturbed(2, 0.02),
            ExpandingMap::perturbed(2, 0.05), ExpandingMap::perturbed(2, 0.1)};
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Folds audit results into an outcome, naming the first failing audit.
void absorb(Outcome& o, const audit::AuditResult& r) {
    if (!r.passed() && o.pass) {
        o.pass = false;
        o.detail = r.name + ": " + std::to_string(r.violations) + "/" + std::to_string(r.checks) + " violations, " +
                   r.detail;
    }
}

Outcome doubling_exactness() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const TransferOperator op(ExpandingMap::linear(2), kM);
    const auto r = invariant_density(op);
    const double t = seconds_since(t0);
    const double dev = sup_norm(r.density.function() - GridFunction::constant(kM, 1.0));
    o.pass = dev < 1e-10 && r.diagnostics.n_steps <= 5 && t < 1.0;
    o.detail = "sup |phi - 1| = " + fmt(dev) + " after " + std::to_string(r.diagnostics.n_steps) + " steps, " +
               fmt(t) + " s";
    return o;
}

Outcome constants_reproduction() {
    Outcome o;
    const auto l = compute_ledger(ExpandingMap::linear(2), 1.0);
    const double da = std::abs(l.a - std::exp(-1.0) / 2);
    const double dt = std::abs(l.theta_paper - std::pow(1 - std::exp(-3.0), std::log(2.0) / 4));
    o.pass = l.omega == 0.0 && l.C == 384.0 && da <= 1e-12 && dt <= 1e-12;
    o.detail = "omega " + fmt(l.omega) + ", C " + fmt(l.C) + ", |a - e^-1/2| " + fmt(da) + ", |theta - ref| " + fmt(dt);
    return o;
}

Outcome operator_identities() {
    Outcome o{true, "100 densities on 5 maps", {}};
    for (const auto& map : test_maps()) {
        const TransferOperator op(map, kM);
        auto ids = audit::operator_identities(op, kSeed, 100);
        absorb(o, ids.mass);
        absorb(o, ids.positivity);
        absorb(o, ids.l1_contraction);
        o.notes.push_back(map.describe() + ": worst mass drift excess over 1e-10 = " + fmt(ids.mass.worst_excess));
    }
    const TransferOperator fine(ExpandingMap::perturbed(2, 0.05), audit::kIdentityResolution);
    const auto f = audit::operator_identities(fine, kSeed, 100);
    o.notes.push_back(std::string("at M = 32768, perturbed{2,0.05} mass audit ") + (f.mass.passed() ? "passes" : "fails") +
                      " (worst excess " + fmt(f.mass.worst_excess) + ")");
    return o;
}

Outcome frequency_halving() {
    Outcome o;
    auto one_plus = [](std::size_t m, int k) { return GridFunction::constant(m, 1.0) + 0.5 * observables::cos_mode(m, k); };
    const TransferOperator op(ExpandingMap::linear(2), kM);
    const double e_half = sup_norm(op.apply(one_plus(kM, 2)) - one_plus(kM, 1));
    const double e_cancel = sup_norm(op.apply(one_plus(kM, 1)) - GridFunction::constant(kM, 1.0));
    o.pass = e_half <= 1e-10 && e_cancel <= 1e-10;
    o.detail = "halving error " + fmt(e_half) + ", cancellation error " + fmt(e_cancel);
    const std::size_t big = std::size_t{1} << 19;
    const TransferOperator fine(ExpandingMap::linear(2), big);
    o.notes.push_back("halving error at M = 2^19: " + fmt(sup_norm(fine.apply(one_plus(big, 2)) - one_plus(big, 1))));
    return o;
}

Outcome distortion_audit() {
    Outcome o{true, "", {}};
    const auto t0 = std::chrono::steady_clock::now();
    const auto pairs = audit::branch_pairs(ExpandingMap::perturbed(2, 0.05), kSeed, 1000, 8);
    const double t = seconds_since(t0);
    absorb(o, pairs.distortion);
    if (o.pass) o.detail = std::to_string(pairs.distortion.checks) + " checks, " + fmt(t) + " s";
    o.pass = o.pass && t < 30.0;
    return o;
}

// Criteria 6 and 7 share one sweep per map.
const std::vector<audit::HolderSweepAudit>& holder_sweeps() {
    static const std::vector<audit::HolderSweepAudit> sweeps = [] {
        std::vector<audit::HolderSweepAudit> out;
        for (const auto& map : test_maps()) {
            const TransferOperator op(map, kM);
            out.push_back(audit::holder_sweeps(op, audit::test_densities(kM, kSeed)));
        }
        return out;
    }();
    return sweeps;
}

Outcome holder_sweep(bool floor) {
    Outcome o{true, "", {}};
    std::size_t checks = 0;
    for (const auto& s : holder_sweeps()) {
        const auto& r = floor ? s.iterate_floor : s.log_contraction;
        checks += r.checks;
        absorb(o, r);
    }
    if (o.pass) o.detail = std::to_string(checks) + " checks on 5 maps";
    return o;
}

Outcome coupling_inequality() {
    Outcome o;
    const auto map = ExpandingMap::perturbed(2, 0.05);
    const TransferOperator op(map, kM);
    const auto phi = invariant_density(op).density;
    const auto l = compute_ledger(map, 1.0);
    const auto t0 = std::chrono::steady_clock::now();
    const auto trace =
        monte_carlo_coupling(op, observables::exp_cos_density(kM, 0.3), phi, 1.0, 5 * l.N_K, 100000, kSeed);
    const double t = seconds_since(t0);
    bool rows = true, marginals = !trace.marginals.empty();
    for (const auto& r : trace.rows) rows = rows && r.mismatch_ok && r.coupling_ok;
    for (const auto& m : trace.marginals) marginals = marginals && m.ok;
    o.pass = rows && marginals && t < 120.0;
    o.detail = std::to_string(trace.rows.size()) + " steps, inequalities " + (rows ? "hold" : "VIOLATED") +
               ", chi-square " + (marginals ? "passes" : "FAILS") + ", " + fmt(t) + " s";
    return o;
}

Outcome per_map(const std::function<audit::AuditResult(const TransferOperator&, const GridDensity&)>& run,
                const std::string& what) {
    Outcome o{true, "", {}};
    std::size_t checks = 0;
    for (const auto& map : test_maps()) {
        const TransferOperator op(map, kM);
        const auto phi = invariant_density(op).density;
        const auto r = run(op, phi);
        checks += r.checks;
        absorb(o, r);
    }
    if (o.pass) o.detail = std::to_string(checks) + " " + what + " on 5 maps";
    return o;
}

Outcome correlation_bound() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = per_map(
        [](const TransferOperator& op, const GridDensity& phi) {
            return audit::correlation_sweep(op, phi, kSeed).main_bound;
        },
        "cells");
    const double t = seconds_since(t0);
    o.pass = o.pass && t < 300.0;
    o.detail += ", " + fmt(t) + " s";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    diagnostics::set_warning_sink({});
    int only = 0;
    if (argc == 3 && std::string(argv[1]) == "--criterion") only = std::atoi(argv[2]);
    if (argc != 1 && (only < 1 || only > 11)) {
        std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
        return 2;
    }
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "doubling-map exactness", doubling_exactness},
        {2, "constants reproduction", constants_reproduction},
        {3, "operator identities", operator_identities},
        {4, "frequency-halving oracle", frequency_halving},
        {5, "distortion audit", distortion_audit},
        {6, "Hoelder-log contraction", [] { return holder_sweep(false); }},
        {7, "iterates.floor", [] { return holder_sweep(true); }},
        {8, "coupling inequality", coupling_inequality},
        {9, "density convergence bound",
         [] {
             return per_map(
                 [](const TransferOperator& op, const GridDensity& phi) {
                     return audit::density_convergence(op, phi, audit::test_densities(op.resolution(), kSeed));
                 },
                 "checks");
         }},
        {10, "correlation decay bound", correlation_bound},
        {11, "uniqueness",
         [] {
             return per_map([](const TransferOperator& op, const GridDensity&) { return audit::uniqueness(op); },
                            "seed pairs");
         }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const auto known = kKnownLimitations.find(c.id);
        std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    seconds_since(t0));
        if (!o.pass && known != kKnownLimitations.end()) std::printf("  known limitation: %s\n", known->second);
        for (const auto& n : o.notes) std::printf("  %s\n", n.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
