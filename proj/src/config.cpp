#include "dcma/config.hpp"

#include <fstream>

#include "dcma/report.hpp"

namespace dcma {

using json = nlohmann::ordered_json;

void RunConfig::validate() const {
    if (!source.is_scenario()) {
        if (source.csv_path.empty())
            throw ConfigError("config: source needs either a scenario or a csv path");
        if (source.roles.treatment.empty() || source.roles.outcome.empty() ||
            source.roles.mediators.empty())
            throw ConfigError("config: csv source requires treatment, outcome, and mediator roles");
    }
    pipeline.validate();
    if (bootstrap) bootstrap->validate();
    if (reps < 1) throw ConfigError("config: reps must be >= 1");
    if (oracle.n_oracle < 2 || oracle.b_oracle < 2)
        throw ConfigError("config: oracle sizes must be >= 2");
    if (out_dir.empty()) throw ConfigError("config: out_dir must not be empty");
}

void RunConfig::finalize(std::size_t n_mediators) {
    // Stage seeds left at 0 derive from the master seed; explicit values win.
    if (pipeline.train.master_seed == 0)
        pipeline.train.master_seed = derive_seed(seed, 0x7452);
    if (pipeline.sim.master_seed == 0) pipeline.sim.master_seed = derive_seed(seed, 0x534D);
    pipeline.sim.threads = threads;
    if (bootstrap && bootstrap->seed == 0) bootstrap->seed = derive_seed(seed, 0xB007);
    if (source.scenario && source.scenario->seed == 0)
        source.scenario->seed = derive_seed(seed, 0xDA7A);
    if (ipse_all) pipeline.sim.ipse_indices = SimConfig::all_ipse(n_mediators);
    pipeline.sim.validate(n_mediators);
}

namespace {

ScenarioSpec scenario_from_json(const json& j) {
    ScenarioSpec spec;
    spec.id = scenario_from_name(j.at("id").get<std::string>());
    spec.n = j.value("n", spec.n);
    spec.seed = j.value("seed", spec.seed);
    if (j.value("null_variant", false)) spec = spec.null_variant();
    if (j.contains("overrides")) {
        const auto& o = j.at("overrides");
        auto set = [&o](const char* key, double& field) {
            if (o.contains(key)) field = o.at(key).get<double>();
        };
        set("s1_med_a", spec.s1.med_a);
        set("s1_med_z", spec.s1.med_z);
        set("s1_med_sd", spec.s1.med_sd);
        set("s1_y_a", spec.s1.y_a);
        set("s1_y_m", spec.s1.y_m);
        set("s1_y_sd", spec.s1.y_sd);
        set("s2_y_a", spec.s2.y_a);
        set("s2_cov_decay", spec.s2.cov_decay);
    }
    return spec;
}

json scenario_to_json(const ScenarioSpec& spec) {
    return json{{"id", scenario_name(spec.id)}, {"n", spec.n}, {"seed", spec.seed}};
}

TrainConfig train_from_json(const json& j) {
    TrainConfig t;
    t.k_draws = j.value("k_draws", t.k_draws);
    t.max_epochs = j.value("max_epochs", t.max_epochs);
    t.batch_size = j.value("batch_size", t.batch_size);
    t.learning_rate = j.value("learning_rate", t.learning_rate);
    t.validation_fraction = j.value("validation_fraction", t.validation_fraction);
    t.patience = j.value("patience", t.patience);
    if (j.contains("hidden")) t.hidden = j.at("hidden").get<std::vector<std::size_t>>();
    t.noise_dim = j.value("noise_dim", t.noise_dim);
    t.master_seed = j.value("master_seed", t.master_seed);
    return t;
}

json train_to_json(const TrainConfig& t) {
    return json{{"k_draws", t.k_draws},
                {"max_epochs", t.max_epochs},
                {"batch_size", t.batch_size},
                {"learning_rate", t.learning_rate},
                {"validation_fraction", t.validation_fraction},
                {"patience", t.patience},
                {"hidden", t.hidden},
                {"noise_dim", t.noise_dim},
                {"master_seed", t.master_seed}};
}

} // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig cfg;
    if (!j.contains("source")) throw ConfigError("config: missing field 'source'");
    const auto& src = j.at("source");
    if (src.contains("scenario")) {
        cfg.source.scenario = scenario_from_json(src.at("scenario"));
    } else if (src.contains("csv")) {
        const auto& c = src.at("csv");
        cfg.source.csv_path = c.at("path").get<std::string>();
        const auto& roles = c.at("roles");
        cfg.source.roles.treatment = roles.at("treatment").get<std::string>();
        cfg.source.roles.outcome = roles.at("outcome").get<std::string>();
        cfg.source.roles.mediators = roles.at("mediators").get<std::vector<std::string>>();
        if (roles.contains("covariates"))
            cfg.source.roles.covariates = roles.at("covariates").get<std::vector<std::string>>();
    } else {
        throw ConfigError("config: source needs 'scenario' or 'csv'");
    }

    if (j.contains("train")) cfg.pipeline.train = train_from_json(j.at("train"));
    if (j.contains("sim")) {
        const auto& s = j.at("sim");
        cfg.pipeline.sim.draws_per_obs = s.value("draws_per_obs", cfg.pipeline.sim.draws_per_obs);
        cfg.pipeline.sim.master_seed = s.value("master_seed", cfg.pipeline.sim.master_seed);
        if (s.contains("ipse")) {
            if (s.at("ipse").is_string()) {
                if (s.at("ipse").get<std::string>() != "all")
                    throw ConfigError("config: sim.ipse must be \"all\" or an index array");
                cfg.ipse_all = true;
            } else {
                cfg.pipeline.sim.ipse_indices = s.at("ipse").get<std::vector<int>>();
                cfg.ipse_all = false;
            }
        }
    }
    if (j.contains("functionals")) {
        cfg.pipeline.functionals.clear();
        for (const auto& f : j.at("functionals"))
            cfg.pipeline.functionals.push_back(functional_from_json(f));
    }
    if (j.contains("outcome_model"))
        cfg.pipeline.outcome_model = outcome_model_from_name(j.at("outcome_model").get<std::string>());
    if (j.contains("bootstrap")) {
        const auto& b = j.at("bootstrap");
        BootstrapConfig bc;
        bc.resamples = b.value("resamples", bc.resamples);
        bc.refits_per_resample = b.value("refits_per_resample", bc.refits_per_resample);
        bc.level = b.value("level", bc.level);
        cfg.bootstrap = bc;
    }
    if (j.contains("oracle")) {
        cfg.oracle.n_oracle = j.at("oracle").value("n_oracle", cfg.oracle.n_oracle);
        cfg.oracle.b_oracle = j.at("oracle").value("b_oracle", cfg.oracle.b_oracle);
    }
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.reps = j.value("reps", cfg.reps);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.write_regimes = j.value("write_regimes", cfg.write_regimes);
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config: parse failure in " + path + ": " + e.what());
    }
    return from_json(j);
}

json RunConfig::to_json() const {
    json j;
    if (source.is_scenario()) {
        j["source"] = json{{"scenario", scenario_to_json(*source.scenario)}};
    } else {
        json roles{{"treatment", source.roles.treatment},
                   {"mediators", source.roles.mediators},
                   {"outcome", source.roles.outcome},
                   {"covariates", source.roles.covariates}};
        j["source"] = json{{"csv", json{{"path", source.csv_path}, {"roles", std::move(roles)}}}};
    }
    j["train"] = train_to_json(pipeline.train);
    json sim{{"draws_per_obs", pipeline.sim.draws_per_obs},
             {"master_seed", pipeline.sim.master_seed}};
    if (ipse_all)
        sim["ipse"] = "all";
    else
        sim["ipse"] = pipeline.sim.ipse_indices;
    j["sim"] = std::move(sim);
    json functionals = json::array();
    for (const auto& f : pipeline.functionals) functionals.push_back(functional_to_json(f));
    j["functionals"] = std::move(functionals);
    j["outcome_model"] = outcome_model_name(pipeline.outcome_model);
    if (bootstrap)
        j["bootstrap"] = json{{"resamples", bootstrap->resamples},
                              {"refits_per_resample", bootstrap->refits_per_resample},
                              {"level", bootstrap->level}};
    j["oracle"] = json{{"n_oracle", oracle.n_oracle}, {"b_oracle", oracle.b_oracle}};
    j["out_dir"] = out_dir;
    j["seed"] = seed;
    j["reps"] = reps;
    j["threads"] = threads;
    j["write_regimes"] = write_regimes;
    return j;
}

RunProfile profile_from_name(const std::string& name) {
    if (name == "quick") return RunProfile::Quick;
    if (name == "table1") return RunProfile::Table1;
    throw ConfigError("unknown profile '" + name + "' (expected quick or table1)");
}

void apply_profile(RunConfig& cfg, RunProfile profile) {
    if (profile == RunProfile::None) return;
    if (!cfg.source.is_scenario())
        throw ConfigError("profiles apply to scenario sources only");
    if (profile == RunProfile::Quick) {
        cfg.source.scenario->n = 2000;
        cfg.reps = 5;
    } else {
        cfg.source.scenario->n = 5000;
        cfg.reps = 20;
    }
    cfg.pipeline.sim.draws_per_obs = 200;
    cfg.pipeline.functionals = {FunctionalSpec::mean(), FunctionalSpec::ed()};
}

} // namespace dcma
