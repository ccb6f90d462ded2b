#include <CLI11.hpp>

#include "dcma/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Distributional causal mediation analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string profile_name;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t reps = 0;
    unsigned threads = 0;
    bool threads_set = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Run configuration file (JSON)")
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory (overrides config)");
        sub->add_option("--seed", seed, "Master seed (overrides config)")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--reps", reps, "Replications (overrides config)");
        sub->add_option("--profile", profile_name, "Preset: quick or table1");
        sub->add_option("--threads", threads, "Worker threads (0 = hardware)")
            ->each([&](const std::string&) { threads_set = true; });
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Generate scenario data and estimate effects");
    CLI::App* estimate = app.add_subcommand("estimate", "Estimate effects from a CSV dataset");
    CLI::App* oracle = app.add_subcommand("oracle", "Ground-truth effects for a scenario");
    CLI::App* ablation = app.add_subcommand("ablation", "Linear-Gaussian outcome ablation study");
    for (CLI::App* sub : {simulate, estimate, oracle, ablation}) add_common(sub);

    std::string scenario_name;
    for (CLI::App* sub : {simulate, oracle, ablation})
        sub->add_option("--scenario", scenario_name, "Scenario id (S1 or S2) when no config is given");

    CLI11_PARSE(app, argc, argv);

    try {
        dcma::RunConfig cfg;
        if (!config_path.empty()) {
            cfg = dcma::RunConfig::from_file(config_path);
        } else if (!scenario_name.empty()) {
            dcma::ScenarioSpec spec;
            spec.id = dcma::scenario_from_name(scenario_name);
            cfg.source.scenario = spec;
        } else {
            std::cerr << "config error: provide --config (or --scenario for scenario commands)\n";
            return dcma::kExitConfig;
        }
        if (!profile_name.empty())
            dcma::apply_profile(cfg, dcma::profile_from_name(profile_name));
        if (seed_set) cfg.seed = seed;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (reps > 0) cfg.reps = reps;
        if (threads_set) cfg.threads = threads;

        return dcma::run_command(app.get_subcommands().front()->get_name(), std::move(cfg));
    } catch (const dcma::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return dcma::kExitConfig;
    } catch (const dcma::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return dcma::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return dcma::kExitRuntime;
    }
}
