// SPDX-License-Identifier: Apache-2.0
#include "spde/config.hpp"
#include "spde/error.hpp"
#include "spde/experiments.hpp"
#include "spde/persist.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace spde;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("spde_test_" + name);
    fs::remove_all(dir);
    return dir;
}

ErrorCode config_error(const std::string& text) {
    try {
        (void)ExperimentConfig::from_map(ConfigMap::parse(text));
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Internal;
}

std::string message_of(const std::string& text) {
    try {
        (void)ExperimentConfig::from_map(ConfigMap::parse(text));
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

const char* kScaling =
    "kind = mc-scaling\n"
    "nx = 16\nnt = 40\nT = 0.1\n"
    "family = linear\n"
    "eps_list = 0.5, 0.25\n"
    "replicas = 60\n"
    "event = mode\nevent_mode = 1\nevent_threshold = 0.2\n"
    "master_seed = 21\n";

}  // namespace

TEST_CASE("config parsing") {
    const auto map = ConfigMap::parse("# comment\n a = 1 \nb=x, y # trailing\n\n");
    CHECK(map.get_double("a") == 1.0);
    CHECK(map.get_string("b") == "x, y");
    CHECK(map.get_double("missing", 3.0) == 3.0);
    CHECK_THROWS_AS(ConfigMap::parse("a = 1\na = 2\n"), Error);
    CHECK_THROWS_AS(ConfigMap::parse("no equals sign\n"), Error);
    try {
        (void)map.get_double("zzz");
        FAIL("expected missing key");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
        CHECK(std::string(e.what()).find("'zzz'") != std::string::npos);
    }
    CHECK(ConfigMap::parse("b = 2\na = 1\n").echo() == "a = 1\nb = 2\n");
}

TEST_CASE("config validation names the offending key") {
    CHECK(config_error("kind = simulate\n") == ErrorCode::Config);
    CHECK(message_of("kind = simulate\n").find("master_seed") != std::string::npos);
    CHECK(config_error("kind = validate\n") == ErrorCode::Internal);
    CHECK(message_of("kind = sample\nmaster_seed = 1\n").find("mc-scaling") != std::string::npos);
    CHECK(config_error("kind = mc-scaling\nmaster_seed = 1\n") == ErrorCode::Config);
    CHECK(config_error("kind = mc-scaling\nmaster_seed = 1\neps_list =\n") == ErrorCode::Config);
    CHECK(config_error("kind = mc-scaling\nmaster_seed = 1\neps_list = 0.1, 0.2\n") == ErrorCode::Config);
    CHECK(config_error("kind = simulate\nmaster_seed = 1\nfrobnicate = 2\n") == ErrorCode::Config);
    CHECK(config_error("kind = simulate\nmaster_seed = 1\nfamily = cubic-f\n") == ErrorCode::UnknownFamily);
    CHECK(config_error("kind = simulate\nmaster_seed = 1\neta = modes\neta_modes = 1,2\neta_amplitudes = 1\n") ==
          ErrorCode::Config);
    const auto c = ExperimentConfig::from_map(ConfigMap::parse(kScaling));
    CHECK(c.eps_list == std::vector<double>{0.5, 0.25});
    CHECK(c.event.kind == EventKind::Mode);
}

TEST_CASE("event functionals") {
    EventSpec e;
    e.kind = EventKind::Mode;
    e.mode = 2;
    e.threshold = 0.3;
    const auto grid = make_grid(32, 1, 1.0);
    const double a = e.target_amplitude(32, 2);
    const Field u = sample_field(32, [&](double x) { return a * std::sqrt(2.0) * std::sin(2 * M_PI * x); });
    CHECK(e.functional(u) == doctest::Approx(0.3));
    e.kind = EventKind::L2;
    e.threshold = 0.5;
    const double b = e.target_amplitude(32, 1);
    CHECK(e.functional(sample_field(32, [&](double x) { return b * std::sqrt(2.0) * std::sin(M_PI * x); })) ==
          doctest::Approx(0.5));
    e.threshold = -INFINITY;
    CHECK(e.occurs(Field(32)));
    (void)grid;
}

TEST_CASE("scaling study is independent of the thread count and seeds are shared across eps") {
    auto map = ConfigMap::parse(kScaling);
    const auto one = run_eps_scaling(ExperimentConfig::from_map(map));
    map.set("threads", "3");
    const auto three = run_eps_scaling(ExperimentConfig::from_map(map));
    REQUIRE(one.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(one.rows[i].p_hat == three.rows[i].p_hat);
        CHECK(one.rows[i].hits == three.rows[i].hits);
        CHECK(one.rows[i].replicas == 60);
        CHECK(one.rows[i].p_hat >= 0.0);
        CHECK(one.rows[i].p_hat <= 1.0);
    }
    // smaller noise makes the rare event rarer
    CHECK(one.rows[1].p_hat <= one.rows[0].p_hat);
}

TEST_CASE("importance sampling with a zero tilt reduces to plain sampling") {
    auto map = ConfigMap::parse(kScaling);
    map.set("kind", "importance");
    map.set("eps", "0.5");
    map.erase("eps_list");
    const auto cfg = ExperimentConfig::from_map(map);
    const auto res = run_importance_sampling(cfg, Control(cfg.grid()), 0.5);
    CHECK(res.estimate == res.plain_estimate);
    CHECK(res.mean_weight == doctest::Approx(1.0));
}

TEST_CASE("run_experiment writes outputs and a manifest") {
    const auto dir = scratch("simulate");
    auto map = ConfigMap::parse("kind = simulate\nnx = 16\nnt = 20\nT = 0.05\nfamily = burgers\n"
                                "eta = modes\neta_modes = 1\neta_amplitudes = 0.5\n"
                                "eps = 0.01\nmaster_seed = 3\n");
    map.set("out", dir.string());
    const auto files = run_experiment(map);
    CHECK(files.size() >= 3);
    REQUIRE(fs::exists(dir / "path.bin"));
    REQUIRE(fs::exists(dir / "manifest.cfg"));
    const auto snap = read_snapshot((dir / "path.bin").string());
    CHECK(snap.nx == 16);
    CHECK(snap.nt == 20);
    CHECK(snap.rows == 21);
    CHECK(slurp(dir / "path.bin").substr(0, 8) == "SPDEFLD1");
    const auto csv = slurp(dir / "path.csv");
    CHECK(csv.find('\n') != std::string::npos);
    const auto manifest = slurp(dir / "manifest.cfg");
    CHECK(manifest.find("master_seed = 3") != std::string::npos);
    // the manifest is a valid config that reproduces the run
    const auto again = scratch("simulate_again");
    auto remap = ConfigMap::load((dir / "manifest.cfg").string());
    remap.set("out", again.string());
    run_experiment(remap);
    CHECK(slurp(again / "path.bin") == slurp(dir / "path.bin"));
    fs::remove_all(dir);
    fs::remove_all(again);
}

TEST_CASE("validate experiment reports every assumption") {
    const auto dir = scratch("validate");
    auto map = ConfigMap::parse("kind = validate\nfamily = burgers\ncoef.rho = 4\n");
    map.set("out", dir.string());
    run_experiment(map);
    const auto csv = slurp(dir / "validate.csv");
    for (const char* name : {"H1-rho", "H2-growth-sigma", "H5-growth-f"}) CHECK(csv.find(name) != std::string::npos);
    CHECK(slurp(dir / "warnings.txt").find("H1") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("golden config runs are byte identical") {
    const auto a = scratch("golden_a");
    const auto b = scratch("golden_b");
    auto map = ConfigMap::load(std::string(SPDE_FIXTURE_DIR) + "/golden_mc_scaling.cfg");
    map.set("replicas", "40");
    map.set("out", a.string());
    run_experiment(map);
    map.set("out", b.string());
    map.set("threads", "2");
    run_experiment(map);
    CHECK(slurp(a / "scaling.csv") == slurp(b / "scaling.csv"));
    CHECK(slurp(a / "manifest.cfg").find(a.string()) != std::string::npos);
    fs::remove_all(a);
    fs::remove_all(b);
}
