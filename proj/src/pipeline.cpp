#include "dcma/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "dcma/parallel.hpp"

namespace dcma {

std::string outcome_model_name(OutcomeModelKind kind) {
    return kind == OutcomeModelKind::MlpEs ? "mlp_es" : "linear_gaussian";
}

OutcomeModelKind outcome_model_from_name(const std::string& name) {
    if (name == "mlp_es") return OutcomeModelKind::MlpEs;
    if (name == "linear_gaussian") return OutcomeModelKind::LinearGaussian;
    throw ConfigError("unknown outcome model '" + name + "'");
}

void PipelineConfig::validate() const {
    train.validate();
    if (functionals.empty()) throw ConfigError("pipeline: no functionals requested");
    for (const auto& f : functionals) f.validate();
}

std::vector<EffectKind> PipelineConfig::effect_kinds() const {
    std::vector<EffectKind> kinds;
    if (sim.include_core) {
        kinds.push_back(EffectKind::ite());
        kinds.push_back(EffectKind::ide());
    }
    for (int s : sim.ipse_indices) kinds.push_back(EffectKind::ipse(s));
    return kinds;
}

PipelineResult run_pipeline(const Dataset& data, const PipelineConfig& cfg) {
    cfg.validate();
    data.validate();

    PipelineResult result;
    result.mediator_model = train_generator(data, GeneratorRole::Mediator, cfg.train);
    const ModelMediatorSampler fm(result.mediator_model);

    std::unique_ptr<OutcomeSampler> fy;
    if (cfg.outcome_model == OutcomeModelKind::MlpEs) {
        result.outcome_model = train_generator(data, GeneratorRole::Outcome, cfg.train);
        fy = std::make_unique<ModelOutcomeSampler>(*result.outcome_model);
    } else {
        result.outcome_linear = fit_linear_gaussian(data);
        fy = std::make_unique<LinearGaussianOutcomeSampler>(*result.outcome_linear);
    }

    result.regimes = forward_simulate(fm, *fy, data, cfg.sim);
    for (const EffectKind& kind : cfg.effect_kinds())
        for (const FunctionalSpec& f : cfg.functionals)
            result.effects.push_back(compute_effect(result.regimes, kind, f));
    return result;
}

std::vector<EffectEstimate> run_pipeline_effects(const Dataset& data, const PipelineConfig& cfg) {
    return run_pipeline(data, cfg).effects;
}

namespace {

PipelineConfig reseeded(const PipelineConfig& base, std::uint64_t seed) {
    PipelineConfig cfg = base;
    cfg.train.master_seed = derive_seed(seed, 1);
    cfg.sim.master_seed = derive_seed(seed, 2);
    return cfg;
}

} // namespace

std::vector<EffectEstimate> bootstrap_effects(const Dataset& data, const PipelineConfig& pipeline,
                                              const BootstrapConfig& cfg) {
    cfg.validate();
    pipeline.validate();
    data.validate();
    const std::size_t n = data.n();
    const std::size_t r_total = cfg.resamples;

    std::vector<EffectEstimate> point = run_pipeline_effects(data, pipeline);
    const std::size_t n_effects = point.size();

    // values[r] holds one scalar (or curve) per effect, empty when skipped.
    std::vector<std::vector<std::vector<double>>> values(r_total);
    std::vector<char> failed(r_total, 0);

    PipelineConfig inner = pipeline;
    inner.sim.threads = 1; // parallelism lives at the resample level here

    parallel_for(
        r_total,
        [&](std::size_t r) {
            RngStream resample_stream(cfg.seed, derive_seed(0xB007u, r));
            std::vector<std::size_t> idx(n);
            for (std::size_t i = 0; i < n; ++i)
                idx[i] = static_cast<std::size_t>(resample_stream.next_below(n));
            Dataset resampled;
            try {
                resampled = data.subset(idx);
            } catch (const Error&) {
                failed[r] = 1;
                return;
            }

            std::vector<std::vector<double>> acc(n_effects);
            std::size_t ok_refits = 0;
            for (std::size_t j = 0; j < cfg.refits_per_resample; ++j) {
                try {
                    const auto effs =
                        run_pipeline_effects(resampled, reseeded(inner, derive_seed(cfg.seed, r, j)));
                    for (std::size_t e = 0; e < n_effects; ++e) {
                        const auto& est = effs[e];
                        const std::vector<double> cur =
                            est.is_curve ? est.curve : std::vector<double>{est.point};
                        if (acc[e].empty())
                            acc[e] = cur;
                        else
                            for (std::size_t k = 0; k < cur.size(); ++k) acc[e][k] += cur[k];
                    }
                    ++ok_refits;
                } catch (const Error&) {
                    // a failed refit is dropped; the resample survives if any refit succeeded
                }
            }
            if (ok_refits == 0) {
                failed[r] = 1;
                return;
            }
            for (auto& v : acc)
                for (double& x : v) x /= static_cast<double>(ok_refits);
            values[r] = std::move(acc);
        },
        pipeline.sim.threads);

    std::size_t n_failed = 0;
    for (char f : failed) n_failed += f;
    if (5 * n_failed > r_total)
        throw TrainError("bootstrap_effects: " + std::to_string(n_failed) + " of " +
                         std::to_string(r_total) + " resamples failed (over 20%)");

    const double alpha = 1.0 - cfg.level;
    for (std::size_t e = 0; e < n_effects; ++e) {
        EffectEstimate& est = point[e];
        const std::size_t width = est.is_curve ? est.curve.size() : 1;
        est.lower_curve.assign(est.is_curve ? width : 0, 0.0);
        est.upper_curve.assign(est.is_curve ? width : 0, 0.0);
        std::vector<double> column;
        column.reserve(r_total);
        for (std::size_t k = 0; k < width; ++k) {
            column.clear();
            for (std::size_t r = 0; r < r_total; ++r)
                if (!failed[r]) column.push_back(values[r][e][k]);
            const double lo = empirical_quantile(column, alpha / 2.0);
            const double hi = empirical_quantile(column, 1.0 - alpha / 2.0);
            if (est.is_curve) {
                est.lower_curve[k] = lo;
                est.upper_curve[k] = hi;
            } else {
                est.lower = lo;
                est.upper = hi;
            }
        }
        est.has_interval = true;
        est.meta.resamples = r_total - n_failed;
        est.meta.refits = cfg.refits_per_resample;
        est.meta.seed = cfg.seed;
        est.meta.level = cfg.level;
    }
    return point;
}

} // namespace dcma
