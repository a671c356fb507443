#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "expcircle/circle_map.hpp"
#include "expcircle/errors.hpp"

namespace expcircle::cli {

class ConfigError : public Error {
public:
    using Error::Error;
};

enum ExitCode : int { kPass = 0, kConfigError = 2, kNoConvergence = 3, kAuditViolation = 4 };

struct MapSpec {
    std::string family = "perturbed";
    int w = 2;
    double eps = 0.05;
    // custom: lift = w x + sum_k sin_k sin(2 pi k x) + cos_k cos(2 pi k x)
    std::optional<double> lambda;
    std::optional<double> d2_sup;
    std::vector<double> sin_coeffs;
    std::vector<double> cos_coeffs;
};

struct RunConfig {
    MapSpec map;
    double alpha = 1.0;
    std::size_t resolution = 4096;
    std::uint64_t seed = 42;
    std::size_t trials = 100000;
    int n_max = 60;
    bool n_max_given = false;  ///< coupling defaults to 5 N_K otherwise
    double invariant_tol = 1e-12;
    int invariant_max_iter = 10000;
    std::string f = "step";
    std::string g = "cos";
    std::optional<unsigned> threads;
    std::string out_dir;
};

/// Applies a JSON document onto `config`. Unknown keys and wrong types throw ConfigError.
void apply_json(RunConfig& config, const std::string& text);

ExpandingMap build_map(const MapSpec& spec);

/// Full command line, e.g. {"expcircle", "constants", "--alpha", "1"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace expcircle::cli
