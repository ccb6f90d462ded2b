#include "dcma/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "dcma/report.hpp"

namespace dcma {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// A run owns its output directory for its whole lifetime.
class OutputDirLock {
  public:
    explicit OutputDirLock(const std::string& dir) : lock_path_(fs::path(dir) / ".lock") {
        fs::create_directories(dir);
        std::error_code ec;
        if (fs::exists(lock_path_, ec))
            throw Error("output directory '" + dir + "' is locked by another run (" +
                        lock_path_.string() + " exists)");
        std::ofstream lock(lock_path_);
        if (!lock) throw Error("cannot create lock file " + lock_path_.string());
        lock << "pid unknown\n";
    }
    ~OutputDirLock() {
        std::error_code ec;
        fs::remove(lock_path_, ec);
    }
    OutputDirLock(const OutputDirLock&) = delete;
    OutputDirLock& operator=(const OutputDirLock&) = delete;

  private:
    fs::path lock_path_;
};

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

void write_resolved_config(const RunConfig& cfg) {
    std::ofstream out(out_path(cfg, "resolved_config.json"));
    if (!out) throw DataError("cannot write resolved_config.json");
    out << cfg.to_json().dump(2) << "\n";
}

Dataset load_source(RunConfig& cfg) {
    if (cfg.source.is_scenario()) {
        cfg.finalize(cfg.source.scenario->n_mediators());
        return generate_scenario(*cfg.source.scenario);
    }
    const CsvTable table = read_csv(cfg.source.csv_path);
    Dataset data = dataset_from_csv(table, cfg.source.roles);
    cfg.finalize(data.n_mediators());
    return data;
}

json run_meta(const RunConfig& cfg, const Dataset& data) {
    return json{{"n", data.n()},
                {"n_mediators", data.n_mediators()},
                {"d_z", data.d_z()},
                {"b", cfg.pipeline.sim.draws_per_obs},
                {"seed", cfg.seed},
                {"outcome_model", outcome_model_name(cfg.pipeline.outcome_model)}};
}

void write_single_run_artifacts(const RunConfig& cfg, const Dataset& data,
                                const PipelineResult& result,
                                const std::vector<EffectEstimate>& effects) {
    save_checkpoint(result.mediator_model, out_path(cfg, "fm.ckpt"));
    if (result.outcome_model) save_checkpoint(*result.outcome_model, out_path(cfg, "fy.ckpt"));
    write_effects_json(effects, run_meta(cfg, data), out_path(cfg, "effects.json"));
    write_effects_csv(effects, out_path(cfg, "effects.csv"));
    if (cfg.write_regimes) dump_regimes_csv(result.regimes, out_path(cfg, "regimes.csv"));
}

OracleTruth oracle_for(const RunConfig& cfg, bool with_reference) {
    OracleOptions opts;
    opts.threads = cfg.threads;
    opts.collect_regime_reference = with_reference;
    std::vector<FunctionalSpec> functionals;
    for (const auto& f : cfg.pipeline.functionals)
        if (!f.is_curve()) functionals.push_back(f);
    if (functionals.empty())
        throw ConfigError("oracle: the functional list has no scalar functionals");
    return oracle_truth(*cfg.source.scenario, cfg.oracle.n_oracle, cfg.oracle.b_oracle,
                        functionals, opts);
}

} // namespace

void cmd_simulate(RunConfig cfg) {
    if (!cfg.source.is_scenario())
        throw ConfigError("simulate: requires a scenario source (use estimate for CSV data)");
    cfg.validate();
    const Dataset data = load_source(cfg);
    OutputDirLock lock(cfg.out_dir);
    write_resolved_config(cfg);
    write_dataset_csv(data, out_path(cfg, "data.csv"));

    if (cfg.reps == 1) {
        const PipelineResult result = run_pipeline(data, cfg.pipeline);
        write_single_run_artifacts(cfg, data, result, result.effects);
        return;
    }

    const OracleTruth truth = oracle_for(cfg, false);
    write_oracle_json(truth, out_path(cfg, "oracle.json"));
    const StudyResult study = run_replication_study(
        *cfg.source.scenario, cfg.pipeline.outcome_model == OutcomeModelKind::MlpEs
                                  ? StudyMethod::DcmaEs
                                  : StudyMethod::LinearGaussianAblation,
        cfg.reps, cfg.pipeline, truth);
    write_study_csv({study}, out_path(cfg, "bias_rmse.csv"));
    std::ofstream sj(out_path(cfg, "study.json"));
    sj << study_to_json(study).dump(2) << "\n";
}

void cmd_estimate(RunConfig cfg) {
    if (cfg.source.is_scenario())
        throw ConfigError("estimate: requires a csv source (use simulate for scenarios)");
    cfg.validate();
    const Dataset data = load_source(cfg);
    OutputDirLock lock(cfg.out_dir);
    write_resolved_config(cfg);

    const PipelineResult result = run_pipeline(data, cfg.pipeline);
    std::vector<EffectEstimate> effects = result.effects;
    if (cfg.bootstrap) effects = bootstrap_effects(data, cfg.pipeline, *cfg.bootstrap);
    write_single_run_artifacts(cfg, data, result, effects);
}

void cmd_oracle(RunConfig cfg) {
    if (!cfg.source.is_scenario())
        throw ConfigError("oracle: requires a scenario source (the mechanism must be known)");
    cfg.validate();
    cfg.finalize(cfg.source.scenario->n_mediators());
    OutputDirLock lock(cfg.out_dir);
    write_resolved_config(cfg);
    const OracleTruth truth = oracle_for(cfg, false);
    write_oracle_json(truth, out_path(cfg, "oracle.json"));
}

void cmd_ablation(RunConfig cfg) {
    if (!cfg.source.is_scenario()) throw ConfigError("ablation: requires a scenario source");
    cfg.validate();
    cfg.finalize(cfg.source.scenario->n_mediators());
    OutputDirLock lock(cfg.out_dir);
    write_resolved_config(cfg);

    const OracleTruth truth = oracle_for(cfg, true);
    write_oracle_json(truth, out_path(cfg, "oracle.json"));
    const StudyResult dcma = run_replication_study(*cfg.source.scenario, StudyMethod::DcmaEs,
                                                   cfg.reps, cfg.pipeline, truth);
    const StudyResult ablation = run_replication_study(
        *cfg.source.scenario, StudyMethod::LinearGaussianAblation, cfg.reps, cfg.pipeline, truth);
    write_study_csv({dcma, ablation}, out_path(cfg, "ablation.csv"));
    std::ofstream out(out_path(cfg, "ablation.json"));
    out << json{{"dcma_es", study_to_json(dcma)},
                {"linear_gaussian_ablation", study_to_json(ablation)}}
               .dump(2)
        << "\n";
}

int run_command(const std::string& command, RunConfig cfg) {
    try {
        if (command == "simulate")
            cmd_simulate(std::move(cfg));
        else if (command == "estimate")
            cmd_estimate(std::move(cfg));
        else if (command == "oracle")
            cmd_oracle(std::move(cfg));
        else if (command == "ablation")
            cmd_ablation(std::move(cfg));
        else
            throw ConfigError("unknown command '" + command + "'");
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ArgumentError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace dcma
