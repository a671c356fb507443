#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "expcircle/correlation_suite.hpp"
#include "expcircle/coupling_lab.hpp"
#include "expcircle/observables.hpp"
#include "expcircle/parallel.hpp"
#include "expcircle/system_constants.hpp"
#include "expcircle/transfer_operator.hpp"
#include "expcircle/verification.hpp"

namespace expcircle::cli {

namespace {

using nlohmann::json;

template <class T>
T get_as(const json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* a : allowed) known = known || it.key() == a;
        if (!known) throw ConfigError("unknown config key '" + it.key() + "' in " + where);
    }
}

void apply_map_json(MapSpec& m, const json& j) {
    check_keys(j, {"family", "w", "eps", "lambda", "d2_sup", "sin", "cos"}, "map");
    if (j.contains("family")) m.family = get_as<std::string>(j["family"], "map.family");
    if (j.contains("w")) m.w = get_as<int>(j["w"], "map.w");
    if (j.contains("eps")) m.eps = get_as<double>(j["eps"], "map.eps");
    if (j.contains("lambda")) m.lambda = get_as<double>(j["lambda"], "map.lambda");
    if (j.contains("d2_sup")) m.d2_sup = get_as<double>(j["d2_sup"], "map.d2_sup");
    if (j.contains("sin")) m.sin_coeffs = get_as<std::vector<double>>(j["sin"], "map.sin");
    if (j.contains("cos")) m.cos_coeffs = get_as<std::vector<double>>(j["cos"], "map.cos");
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string resolve_out_dir(const RunConfig& c) {
    if (!c.out_dir.empty()) return c.out_dir;
    if (const char* env = std::getenv("EXPCIRCLE_OUT"); env && *env) return env;
    return {};
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (std::filesystem::path(dir) / name).string());
    f << content;
}

GridFunction named_observable(const std::string& name, std::size_t m, double alpha, std::uint64_t seed) {
    if (name == "cos") return observables::cos_mode(m);
    if (name == "step") return observables::smoothed_step(m);
    if (name == "random") return observables::random_lipschitz(m, seed);
    if (name == "distance") return observables::distance_power(m, alpha);
    throw ConfigError("unknown observable '" + name + "' (expected cos, step, random or distance)");
}

int cmd_constants(const RunConfig& c, std::ostream& out) {
    const ExpandingMap map = build_map(c.map);
    const std::string text = compute_ledger(map, c.alpha).to_json();
    const std::string dir = resolve_out_dir(c);
    if (!dir.empty()) write_file(dir, "constants.json", text + "\n");
    out << text << "\n";
    return kPass;
}

int cmd_invariant(const RunConfig& c, std::ostream& out) {
    const ExpandingMap map = build_map(c.map);
    const TransferOperator op(map, c.resolution);
    const InvariantDensityResult r = invariant_density(op, c.invariant_tol, c.invariant_max_iter);
    std::ostringstream csv;
    write_csv(csv, r.density);

    json j;
    j["map"] = map.describe();
    j["n_steps"] = r.diagnostics.n_steps;
    j["residual"] = r.diagnostics.residual;
    j["final_sup"] = r.diagnostics.final_sup;
    j["final_inf"] = r.diagnostics.final_inf;
    j["lipschitz_estimate"] = r.lipschitz_estimate;
    auto& steps = j["diagnostics"] = json::array();
    for (const auto& s : r.diagnostics.steps) {
        steps.push_back({{"step", s.step}, {"l1_diff", s.l1_diff}, {"sup", s.sup}, {"inf", s.inf}, {"d_l1", s.d_l1}});
    }
    std::vector<double> xs, vs;
    for (std::size_t i = 0; i < r.density.resolution(); ++i) {
        xs.push_back(r.density.function().node(i));
        vs.push_back(r.density[i]);
    }
    j["density"] = {{"x", xs}, {"value", vs}};

    const std::string dir = resolve_out_dir(c);
    if (dir.empty()) {
        out << csv.str();
    } else {
        write_file(dir, "invariant.csv", csv.str());
        write_file(dir, "invariant.json", j.dump(2) + "\n");
        out << "invariant density of " << map.describe() << ": " << r.diagnostics.n_steps << " steps, residual "
            << fmt17(r.diagnostics.residual) << "\n";
    }
    return kPass;
}

int cmd_decay(const RunConfig& c, std::ostream& out) {
    const ExpandingMap map = build_map(c.map);
    const TransferOperator op(map, c.resolution);
    const GridDensity phi = invariant_density(op, c.invariant_tol, c.invariant_max_iter).density;
    const GridFunction f = named_observable(c.f, c.resolution, c.alpha, c.seed);
    const GridFunction g = named_observable(c.g, c.resolution, c.alpha, c.seed + 1);
    const DecayReport rep = decay_report(op, phi, f, g, c.alpha, c.n_max);
    const std::string dir = resolve_out_dir(c);
    if (dir.empty()) {
        out << rep.to_csv();
    } else {
        write_file(dir, "decay.csv", rep.to_csv());
        write_file(dir, "decay.json", rep.to_json() + "\n");
        out << "decay report for " << map.describe() << ": " << (rep.ok ? "all bounds hold" : "BOUND VIOLATED")
            << "\n";
    }
    return rep.ok ? kPass : kAuditViolation;
}

int cmd_coupling(const RunConfig& c, std::ostream& out) {
    const ExpandingMap map = build_map(c.map);
    const TransferOperator op(map, c.resolution);
    const ConstantsLedger ledger = compute_ledger(map, c.alpha);
    const GridDensity phi = invariant_density(op, c.invariant_tol, c.invariant_max_iter).density;
    const GridDensity psi1 = observables::exp_cos_density(c.resolution, 0.3);
    const int n_max = c.n_max_given ? c.n_max : 5 * ledger.N_K;
    const CouplingTrace trace = monte_carlo_coupling(op, psi1, phi, c.alpha, n_max, c.trials, c.seed);
    const std::string dir = resolve_out_dir(c);
    if (dir.empty()) {
        out << trace.to_csv();
    } else {
        write_file(dir, "coupling.csv", trace.to_csv());
        write_file(dir, "coupling.json", trace.to_json() + "\n");
        out << "coupling on " << map.describe() << ": " << (trace.ok ? "all inequalities hold" : "VIOLATION")
            << "\n";
    }
    return trace.ok ? kPass : kAuditViolation;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    const ExpandingMap map = build_map(c.map);
    audit::RunOptions o;
    o.resolution = c.resolution;
    o.seed = c.seed;
    o.trials = c.trials;
    o.alpha = c.alpha;
    o.n_max = c.n_max;
    const auto results = audit::run_all(map, o);
    bool ok = true;
    json j = json::array();
    for (const auto& r : results) {
        ok = ok && r.passed();
        out << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.checks << " checks";
        if (!r.passed()) out << ", " << r.violations << " violations: " << r.detail;
        out << ")\n";
        j.push_back({{"name", r.name},
                     {"passed", r.passed()},
                     {"checks", r.checks},
                     {"violations", r.violations},
                     {"worst_excess", r.worst_excess},
                     {"detail", r.detail}});
    }
    if (const std::string dir = resolve_out_dir(c); !dir.empty()) write_file(dir, "verify.json", j.dump(2) + "\n");
    out << (ok ? "verify: all audits pass" : "verify: audit violations") << "\n";
    return ok ? kPass : kAuditViolation;
}

}  // namespace

void apply_json(RunConfig& c, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j,
               {"map", "alpha", "resolution", "seed", "trials", "n_max", "invariant_tol", "invariant_max_iter", "f",
                "g", "threads", "out"},
               "config");
    if (j.contains("map")) apply_map_json(c.map, j["map"]);
    if (j.contains("alpha")) c.alpha = get_as<double>(j["alpha"], "alpha");
    if (j.contains("resolution")) c.resolution = get_as<std::size_t>(j["resolution"], "resolution");
    if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j["seed"], "seed");
    if (j.contains("trials")) c.trials = get_as<std::size_t>(j["trials"], "trials");
    if (j.contains("n_max")) {
        c.n_max = get_as<int>(j["n_max"], "n_max");
        c.n_max_given = true;
    }
    if (j.contains("invariant_tol")) c.invariant_tol = get_as<double>(j["invariant_tol"], "invariant_tol");
    if (j.contains("invariant_max_iter")) c.invariant_max_iter = get_as<int>(j["invariant_max_iter"], "invariant_max_iter");
    if (j.contains("f")) c.f = get_as<std::string>(j["f"], "f");
    if (j.contains("g")) c.g = get_as<std::string>(j["g"], "g");
    if (j.contains("threads")) c.threads = get_as<unsigned>(j["threads"], "threads");
    if (j.contains("out")) c.out_dir = get_as<std::string>(j["out"], "out");
}

ExpandingMap build_map(const MapSpec& m) {
    if (m.family == "linear") return ExpandingMap::linear(m.w);
    if (m.family == "perturbed") return ExpandingMap::perturbed(m.w, m.eps);
    if (m.family != "custom") throw ConfigError("unknown map family '" + m.family + "'");
    if (!m.lambda || !m.d2_sup) throw ConfigError("a custom map needs lambda and d2_sup");
    auto sc = std::make_shared<std::vector<double>>(m.sin_coeffs);
    auto cc = std::make_shared<std::vector<double>>(m.cos_coeffs);
    const double w = m.w;
    CustomMapSpec spec;
    spec.lift = [=](double x) {
        double v = w * x;
        for (std::size_t k = 0; k < sc->size(); ++k) v += (*sc)[k] * std::sin(kTwoPi * (k + 1) * x);
        for (std::size_t k = 0; k < cc->size(); ++k) v += (*cc)[k] * std::cos(kTwoPi * (k + 1) * x);
        return v;
    };
    spec.d1 = [=](double x) {
        double v = w;
        for (std::size_t k = 0; k < sc->size(); ++k) v += (*sc)[k] * kTwoPi * (k + 1) * std::cos(kTwoPi * (k + 1) * x);
        for (std::size_t k = 0; k < cc->size(); ++k) v -= (*cc)[k] * kTwoPi * (k + 1) * std::sin(kTwoPi * (k + 1) * x);
        return v;
    };
    spec.d2 = [=](double x) {
        double v = 0.0;
        for (std::size_t k = 0; k < sc->size(); ++k) {
            const double f = kTwoPi * (k + 1);
            v -= (*sc)[k] * f * f * std::sin(f * x);
        }
        for (std::size_t k = 0; k < cc->size(); ++k) {
            const double f = kTwoPi * (k + 1);
            v -= (*cc)[k] * f * f * std::cos(f * x);
        }
        return v;
    };
    spec.lambda = *m.lambda;
    spec.winding = m.w;
    spec.d2_sup = *m.d2_sup;
    spec.label = "custom{" + std::to_string(m.w) + "}";
    return ExpandingMap::custom(std::move(spec));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Transfer-operator experiments for smooth expanding circle maps", "expcircle"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::size_t> resolution, trials;
    std::optional<double> alpha;
    std::optional<int> n_max;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory (falls back to EXPCIRCLE_OUT)");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--threads", threads, "worker threads");
    app.add_option("--resolution", resolution, "grid resolution M (power of two)");
    app.add_option("--alpha", alpha, "Hoelder order in (0, 1]");
    app.add_option("--n-max", n_max, "number of steps");
    app.add_option("--trials", trials, "Monte Carlo trials");

    const std::vector<std::pair<const char*, const char*>> commands = {
        {"constants", "print the constants ledger"},
        {"invariant", "compute the invariant density"},
        {"decay", "correlation decay report"},
        {"coupling", "Monte Carlo coupling trace"},
        {"verify", "run every audit"}};
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kPass;
        }
        err << "expcircle: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        RunConfig c;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw ConfigError("cannot read config file " + config_path);
            std::stringstream ss;
            ss << f.rdbuf();
            apply_json(c, ss.str());
        }
        if (!out_dir.empty()) c.out_dir = out_dir;
        if (seed) c.seed = *seed;
        if (threads) c.threads = *threads;
        if (resolution) c.resolution = *resolution;
        if (trials) c.trials = *trials;
        if (alpha) c.alpha = *alpha;
        if (n_max) {
            c.n_max = *n_max;
            c.n_max_given = true;
        }
        if (c.threads) parallel::set_thread_count(*c.threads);

        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "constants") return cmd_constants(c, out);
        if (cmd == "invariant") return cmd_invariant(c, out);
        if (cmd == "decay") return cmd_decay(c, out);
        if (cmd == "coupling") return cmd_coupling(c, out);
        return cmd_verify(c, out);
    } catch (const NoConvergence& e) {
        err << "expcircle: " << e.what() << "\n";
        return kNoConvergence;
    } catch (const RootFindingFailure& e) {
        err << "expcircle: " << e.what() << "\n";
        return kNoConvergence;
    } catch (const NotInvariant& e) {
        err << "expcircle: " << e.what() << "\n";
        return kNoConvergence;
    } catch (const FloorViolation& e) {
        err << "expcircle: " << e.what() << "\n";
        return kAuditViolation;
    } catch (const Error& e) {
        err << "expcircle: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "expcircle: " << e.what() << "\n";
        return kConfigError;
    }
}

}  // namespace expcircle::cli
