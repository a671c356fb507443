#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "expcircle/density_grid.hpp"

using namespace expcircle;
using json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "expcircle");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_config(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / ("expcircle_test_" + name + ".json");
    std::ofstream(path) << body;
    return path.string();
}

}  // namespace

TEST_CASE("constants for the doubling map") {
    const auto r = run({"constants", "--config", write_config("lin2", R"({"map":{"family":"linear","w":2}})")});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("omega").get<double>() == 0.0);
    CHECK(j.at("C").get<double>() == 384.0);
    CHECK(std::abs(j.at("a").get<double>() - std::exp(-1.0) / 2) < 1e-12);
}

TEST_CASE("config errors exit with code 2") {
    CHECK(run({"constants", "--alpha", "0"}).code == 2);
    CHECK(run({"constants", "--config", write_config("eps", R"({"map":{"family":"perturbed","w":2,"eps":0.2}})")}).code == 2);
    CHECK(run({"constants", "--config", write_config("unknown", R"({"mapp":{}})")}).code == 2);
    CHECK(run({"constants", "--config", write_config("unknown_map", R"({"map":{"family":"linear","slope":2}})")}).code == 2);
    CHECK(run({"constants", "--config", write_config("type", R"({"alpha":"one"})")}).code == 2);
    CHECK(run({"constants", "--config", write_config("json", "{not json")}).code == 2);
    CHECK(run({"constants", "--config", "/nonexistent/config.json"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    const auto r = run({"invariant", "--resolution", "1000"});
    CHECK(r.code == 2);
}

TEST_CASE("a corrupted custom map surfaces NotExpanding") {
    const auto path = write_config(
        "custom_bad", R"({"map":{"family":"custom","w":2,"sin":[0.05],"lambda":1.9,"d2_sup":1.9739208802178717}})");
    const auto r = run({"verify", "--config", path});
    CHECK(r.code == 2);
    CHECK(r.err.find("lambda") != std::string::npos);

    const auto ok = write_config(
        "custom_ok", R"({"map":{"family":"custom","w":2,"sin":[0.05],"lambda":1.68584,"d2_sup":1.97393}})");
    const auto c = run({"constants", "--config", ok});
    REQUIRE(c.code == 0);
    CHECK(json::parse(c.out).at("lambda").get<double>() == 1.68584);
}

TEST_CASE("non-convergence exits with code 3") {
    const auto path = write_config("noconv", R"({"map":{"family":"perturbed","w":2,"eps":0.05},"invariant_max_iter":2})");
    CHECK(run({"invariant", "--config", path, "--resolution", "512"}).code == 3);
}

TEST_CASE("invariant density of the doubling map is the constant 1") {
    const auto r = run({"invariant", "--config", write_config("inv", R"({"map":{"family":"linear","w":2}})"),
                        "--resolution", "256"});
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    const auto f = read_csv(is);
    CHECK(f.resolution() == 256);
    for (double v : f.values()) CHECK(std::abs(v - 1.0) < 1e-10);
}

TEST_CASE("decay and coupling write their artifacts") {
    const auto dir = (std::filesystem::temp_directory_path() / "expcircle_cli_out").string();
    std::filesystem::remove_all(dir);
    const auto cfg = write_config("decay", R"({"map":{"family":"perturbed","w":2,"eps":0.05},"resolution":1024,"n_max":20})");
    const auto d = run({"decay", "--config", cfg, "--out", dir});
    CHECK(d.code == 0);
    CHECK(std::filesystem::exists(dir + "/decay.csv"));
    CHECK(json::parse(std::ifstream(dir + "/decay.json")).at("ok").get<bool>());

    const auto c1 = run({"coupling", "--config", cfg, "--trials", "10000", "--seed", "42"});
    const auto c2 = run({"coupling", "--config", cfg, "--trials", "10000", "--seed", "42"});
    REQUIRE(c1.code == 0);
    CHECK(c1.out == c2.out);
    CHECK(c1.out.rfind("n,k,tv_true,empirical_mismatch,bound_coupling,bound_theta\n", 0) == 0);
    // n_max given explicitly: rows 0..20 plus the header
    CHECK(std::count(c1.out.begin(), c1.out.end(), '\n') == 22);
    std::filesystem::remove_all(dir);
}

TEST_CASE("coupling defaults to five regeneration blocks") {
    const auto cfg = write_config("cpl", R"({"map":{"family":"linear","w":2},"resolution":512,"trials":10000})");
    const auto r = run({"coupling", "--config", cfg});
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5 * 6 + 2);
}

TEST_CASE("apply_json fills the run configuration") {
    cli::RunConfig c;
    cli::apply_json(c, R"({"alpha":0.5,"resolution":2048,"seed":7,"trials":20000,"n_max":12,"f":"cos","g":"random","threads":1})");
    CHECK(c.alpha == 0.5);
    CHECK(c.resolution == 2048);
    CHECK(c.seed == 7);
    CHECK(c.trials == 20000);
    CHECK(c.n_max == 12);
    CHECK(c.n_max_given);
    CHECK(c.g == "random");
    CHECK(c.threads == 1u);
    cli::RunConfig d;
    CHECK(d.resolution == 4096);
    CHECK(d.alpha == 1.0);
    CHECK(d.seed == 42);
    CHECK(d.trials == 100000);
    CHECK(d.n_max == 60);
    CHECK_THROWS_AS(cli::apply_json(d, R"({"bogus":1})"), cli::ConfigError);
}
