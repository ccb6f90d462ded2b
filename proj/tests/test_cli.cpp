#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "dcma/commands.hpp"
#include "dcma/report.hpp"

using namespace dcma;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("dcma_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

RunConfig small_s1_config(const std::string& out_dir, std::uint64_t seed) {
    RunConfig cfg;
    ScenarioSpec spec;
    spec.id = ScenarioId::S1;
    spec.n = 700;
    cfg.source.scenario = spec;
    cfg.pipeline.train.hidden = {16};
    cfg.pipeline.train.max_epochs = 40;
    cfg.pipeline.train.patience = 8;
    cfg.pipeline.train.k_draws = 5;
    cfg.pipeline.sim.draws_per_obs = 30;
    cfg.out_dir = out_dir;
    cfg.seed = seed;
    cfg.threads = 2;
    return cfg;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("config round trip through json") {
    RunConfig cfg = small_s1_config("somewhere", 99);
    cfg.pipeline.functionals = {FunctionalSpec::mean(), FunctionalSpec::quantile(0.25),
                                FunctionalSpec::exceedance(140.0),
                                FunctionalSpec::qte_curve({0.1, 0.5, 0.9})};
    BootstrapConfig bc;
    bc.resamples = 7;
    cfg.bootstrap = bc;
    const auto j = cfg.to_json();
    const RunConfig back = RunConfig::from_json(j);
    CHECK(back.to_json() == j);
}

TEST_CASE("invalid tau in config is rejected naming the field") {
    nlohmann::json j = {
        {"source", {{"scenario", {{"id", "S1"}}}}},
        {"functionals", {{{"kind", "quantile"}, {"tau", 1.2}}}},
    };
    try {
        RunConfig::from_json(j);
        FAIL("expected a validation error");
    } catch (const ArgumentError& e) {
        CHECK(std::string(e.what()).find("tau") != std::string::npos);
    }
}

TEST_CASE("cmd_simulate writes the advertised artifacts") {
    TempDir tmp("simulate");
    RunConfig cfg = small_s1_config(tmp.file("run"), 21);
    cmd_simulate(cfg);
    for (const char* name : {"data.csv", "fm.ckpt", "fy.ckpt", "effects.json", "effects.csv",
                             "regimes.csv", "resolved_config.json"}) {
        CHECK_MESSAGE(fs::exists(fs::path(tmp.file("run")) / name), name);
    }
    // effects.json parses and has the expected entries
    nlohmann::json effects = nlohmann::json::parse(read_file(tmp.file("run/effects.json")));
    CHECK(effects.at("effects").size() == 3 * 2); // ITE, IDE, IPSE1 x {mean, ed}
}

TEST_CASE("simulate then estimate round trip reproduces mean effects") {
    TempDir tmp("roundtrip");
    RunConfig sim_cfg = small_s1_config(tmp.file("sim"), 31);
    sim_cfg.source.scenario->n = 1500;
    sim_cfg.pipeline.train.hidden = {24, 24};
    sim_cfg.pipeline.train.max_epochs = 80;
    sim_cfg.pipeline.train.master_seed = 310; // pin the refit so the rerun
    sim_cfg.pipeline.sim.draws_per_obs = 60;  // differs by simulation noise only
    cmd_simulate(sim_cfg);

    RunConfig est_cfg;
    est_cfg.source.csv_path = tmp.file("sim/data.csv");
    est_cfg.source.roles.treatment = "a";
    est_cfg.source.roles.outcome = "y";
    est_cfg.source.roles.mediators = {"m1"};
    est_cfg.source.roles.covariates = {"z1"};
    est_cfg.pipeline = sim_cfg.pipeline;
    est_cfg.pipeline.sim.master_seed = 0; // re-derived from the new master seed
    est_cfg.out_dir = tmp.file("est");
    est_cfg.seed = 32;
    est_cfg.threads = 2;
    cmd_estimate(est_cfg);

    const auto sim_effects = nlohmann::json::parse(read_file(tmp.file("sim/effects.json")));
    const auto est_effects = nlohmann::json::parse(read_file(tmp.file("est/effects.json")));
    for (std::size_t i = 0; i < sim_effects.at("effects").size(); ++i) {
        const auto& se = sim_effects.at("effects")[i];
        const auto& ee = est_effects.at("effects")[i];
        REQUIRE(se.at("effect") == ee.at("effect"));
        if (se.at("functional") == "mean") {
            CHECK(std::abs(se.at("point").get<double>() - ee.at("point").get<double>()) < 0.05);
        }
    }
}

TEST_CASE("estimate rejects malformed csv inputs with exit code 2") {
    TempDir tmp("badcsv");
    RunConfig cfg;
    cfg.source.roles.treatment = "a";
    cfg.source.roles.outcome = "y";
    cfg.source.roles.mediators = {"m"};
    cfg.source.roles.covariates = {"z"};
    cfg.out_dir = tmp.file("out");

    SUBCASE("header-only csv") {
        write_file(tmp.file("empty.csv"), "a,z,m,y\n");
        cfg.source.csv_path = tmp.file("empty.csv");
        CHECK(run_command("estimate", cfg) == kExitConfig);
    }
    SUBCASE("missing value") {
        write_file(tmp.file("missing.csv"), "a,z,m,y\n1,0.5,,2.0\n0,0.1,1.0,2.0\n");
        cfg.source.csv_path = tmp.file("missing.csv");
        CHECK(run_command("estimate", cfg) == kExitConfig);
    }
    SUBCASE("non-numeric cell") {
        write_file(tmp.file("text.csv"), "a,z,m,y\n1,0.5,apple,2.0\n");
        cfg.source.csv_path = tmp.file("text.csv");
        CHECK(run_command("estimate", cfg) == kExitConfig);
    }
    SUBCASE("non-binary treatment") {
        write_file(tmp.file("badtreat.csv"), "a,z,m,y\n2,0.5,1.0,2.0\n0,0.1,1.0,2.0\n");
        cfg.source.csv_path = tmp.file("badtreat.csv");
        CHECK(run_command("estimate", cfg) == kExitConfig);
    }
    SUBCASE("role column absent") {
        write_file(tmp.file("nocol.csv"), "a,z,q,y\n1,0.5,1.0,2.0\n");
        cfg.source.csv_path = tmp.file("nocol.csv");
        CHECK(run_command("estimate", cfg) == kExitConfig);
    }
}

TEST_CASE("estimate leaves the input csv untouched") {
    TempDir tmp("readonly");
    RunConfig sim_cfg = small_s1_config(tmp.file("sim"), 41);
    cmd_simulate(sim_cfg);
    const std::string before = read_file(tmp.file("sim/data.csv"));

    RunConfig est_cfg;
    est_cfg.source.csv_path = tmp.file("sim/data.csv");
    est_cfg.source.roles.treatment = "a";
    est_cfg.source.roles.outcome = "y";
    est_cfg.source.roles.mediators = {"m1"};
    est_cfg.source.roles.covariates = {"z1"};
    est_cfg.pipeline = sim_cfg.pipeline;
    est_cfg.out_dir = tmp.file("est");
    est_cfg.seed = 42;
    cmd_estimate(est_cfg);
    CHECK(read_file(tmp.file("sim/data.csv")) == before);
}

TEST_CASE("replicated simulate writes the bias/rmse table") {
    TempDir tmp("study");
    RunConfig cfg = small_s1_config(tmp.file("run"), 81);
    cfg.source.scenario->n = 500;
    cfg.reps = 2;
    cfg.oracle.n_oracle = 3000;
    cfg.oracle.b_oracle = 30;
    cmd_simulate(cfg);
    CHECK(fs::exists(fs::path(tmp.file("run")) / "bias_rmse.csv"));
    CHECK(fs::exists(fs::path(tmp.file("run")) / "oracle.json"));
    const std::string csv = read_file(tmp.file("run/bias_rmse.csv"));
    CHECK(csv.find("method,metric,effect") == 0);
    // header + (ITE, IDE, IPSE1) x (mean, ed) rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 7);
}

TEST_CASE("profiles preset scenario size and replication count") {
    RunConfig cfg = small_s1_config("unused", 91);
    apply_profile(cfg, profile_from_name("quick"));
    CHECK(cfg.source.scenario->n == 2000);
    CHECK(cfg.reps == 5);
    apply_profile(cfg, profile_from_name("table1"));
    CHECK(cfg.source.scenario->n == 5000);
    CHECK(cfg.reps == 20);
    CHECK_THROWS_AS(profile_from_name("warp"), ConfigError);

    RunConfig csv_cfg;
    csv_cfg.source.csv_path = "x.csv";
    CHECK_THROWS_AS(apply_profile(csv_cfg, RunProfile::Quick), ConfigError);
}

TEST_CASE("oracle command requires a scenario source") {
    TempDir tmp("oraclecsv");
    write_file(tmp.file("d.csv"), "a,z,m,y\n1,0.5,1.0,2.0\n");
    RunConfig cfg;
    cfg.source.csv_path = tmp.file("d.csv");
    cfg.source.roles.treatment = "a";
    cfg.source.roles.outcome = "y";
    cfg.source.roles.mediators = {"m"};
    cfg.source.roles.covariates = {"z"};
    cfg.out_dir = tmp.file("out");
    CHECK(run_command("oracle", cfg) == kExitConfig);
}

TEST_CASE("oracle command is deterministic for a fixed seed") {
    TempDir tmp("oracle");
    RunConfig cfg = small_s1_config(tmp.file("a"), 51);
    cfg.oracle.n_oracle = 4000;
    cfg.oracle.b_oracle = 40;
    cmd_oracle(cfg);
    RunConfig cfg2 = small_s1_config(tmp.file("b"), 51);
    cfg2.oracle.n_oracle = 4000;
    cfg2.oracle.b_oracle = 40;
    cmd_oracle(cfg2);
    CHECK(read_file(tmp.file("a/oracle.json")) == read_file(tmp.file("b/oracle.json")));
}

TEST_CASE("output directory lock blocks concurrent reuse") {
    TempDir tmp("lock");
    fs::create_directories(tmp.file("run"));
    write_file(tmp.file("run/.lock"), "held\n");
    RunConfig cfg = small_s1_config(tmp.file("run"), 61);
    CHECK(run_command("simulate", cfg) == kExitRuntime);
}

TEST_CASE("unknown command maps to the config exit code") {
    RunConfig cfg = small_s1_config("unused", 71);
    CHECK(run_command("frobnicate", cfg) == kExitConfig);
}
