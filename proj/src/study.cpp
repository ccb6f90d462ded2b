#include "dcma/study.hpp"

#include <cmath>
#include <limits>

#include "dcma/parallel.hpp"

namespace dcma {

const ContrastValue& OracleTruth::at(const EffectKind& kind,
                                     const FunctionalSpec& functional) const {
    const auto eit = values.find(kind.name());
    if (eit == values.end())
        throw ArgumentError("oracle truth: no values for effect " + kind.name());
    const auto fit = eit->second.find(functional.name());
    if (fit == eit->second.end())
        throw ArgumentError("oracle truth: effect " + kind.name() + " has no functional " +
                            functional.name());
    return fit->second;
}

bool OracleTruth::has(const EffectKind& kind, const FunctionalSpec& functional) const {
    const auto eit = values.find(kind.name());
    return eit != values.end() && eit->second.count(functional.name()) > 0;
}

std::string study_method_name(StudyMethod m) {
    return m == StudyMethod::DcmaEs ? "dcma_es" : "linear_gaussian_ablation";
}

OracleTruth oracle_truth(const ScenarioSpec& spec, std::size_t n_oracle, std::size_t b_oracle,
                         const std::vector<FunctionalSpec>& functionals,
                         const OracleOptions& opts) {
    if (functionals.empty()) throw ArgumentError("oracle_truth: no functionals requested");
    ScenarioSpec oracle_spec = spec;
    oracle_spec.n = n_oracle;
    oracle_spec.seed = derive_seed(spec.seed, 0x0A11CE);
    const Dataset covariates = generate_scenario(oracle_spec);

    const auto fm = truth_mediator_sampler(spec);
    const auto fy = truth_outcome_sampler(spec);

    std::vector<int> ipse = opts.ipse_indices;
    if (ipse.empty()) ipse = SimConfig::all_ipse(spec.n_mediators());

    OracleTruth truth;
    truth.meta.scenario = scenario_name(spec.id);
    truth.meta.n_oracle = n_oracle;
    truth.meta.b_oracle = b_oracle;
    truth.meta.seed = spec.seed;

    SimConfig sim;
    sim.draws_per_obs = b_oracle;
    sim.master_seed = derive_seed(spec.seed, 0x0A11CE, 1);
    sim.threads = opts.threads;

    auto record = [&](const RegimeSamples& regimes, const EffectKind& kind) {
        for (const auto& f : functionals) {
            const EffectEstimate est = compute_effect(regimes, kind, f);
            ContrastValue v;
            v.is_curve = est.is_curve;
            v.value = est.point;
            v.curve = est.curve;
            truth.values[kind.name()][f.name()] = std::move(v);
        }
    };
    auto keep_reference = [&](const RegimeSamples& regimes) {
        if (!opts.collect_regime_reference) return;
        for (const auto& [label, samples] : regimes) {
            const SampleSet ref = subsample_span(samples.pooled(), opts.reference_size);
            truth.regime_reference[label] = ref.data;
        }
    };

    // Stage 1: core regimes (ITE and IDE share Y(0,M0)).
    {
        sim.include_core = true;
        sim.ipse_indices.clear();
        const RegimeSamples core = forward_simulate(*fm, *fy, covariates, sim);
        record(core, EffectKind::ite());
        record(core, EffectKind::ide());
        keep_reference(core);
    }
    // Stage 2: one pathway at a time to bound peak memory.
    for (int s : ipse) {
        sim.include_core = false;
        sim.ipse_indices = {s};
        const RegimeSamples pathway = forward_simulate(*fm, *fy, covariates, sim);
        record(pathway, EffectKind::ipse(s));
        keep_reference(pathway);
    }
    return truth;
}

StudyResult run_replication_study(const ScenarioSpec& spec, StudyMethod method, std::size_t reps,
                                  const PipelineConfig& base_cfg, const OracleTruth& truth) {
    if (reps < 1) throw ArgumentError("run_replication_study: need at least one replication");
    base_cfg.validate();
    for (const auto& f : base_cfg.functionals)
        if (f.is_curve())
            throw ArgumentError("run_replication_study: curve functionals have no scalar bias");

    PipelineConfig proto = base_cfg;
    proto.outcome_model = method == StudyMethod::DcmaEs ? OutcomeModelKind::MlpEs
                                                        : OutcomeModelKind::LinearGaussian;
    if (proto.sim.ipse_indices.empty())
        proto.sim.ipse_indices = SimConfig::all_ipse(spec.n_mediators());

    const std::vector<EffectKind> kinds = proto.effect_kinds();
    const std::size_t n_effects = kinds.size() * proto.functionals.size();

    struct RepOutput {
        bool ok = false;
        std::vector<double> effects;
        std::map<RegimeLabel, double> regime_ed;
    };
    std::vector<RepOutput> outputs(reps);

    PipelineConfig inner = proto;
    inner.sim.threads = 1; // replications are the parallel axis

    parallel_for(
        reps,
        [&](std::size_t r) {
            ScenarioSpec rep_spec = spec;
            rep_spec.seed = derive_seed(spec.seed, 0x5245, r);
            PipelineConfig cfg = inner;
            cfg.train.master_seed = derive_seed(base_cfg.train.master_seed, 0x5245AA, r);
            cfg.sim.master_seed = derive_seed(base_cfg.sim.master_seed, 0x5245BB, r);
            try {
                const Dataset data = generate_scenario(rep_spec);
                const PipelineResult res = run_pipeline(data, cfg);
                RepOutput out;
                out.effects.reserve(n_effects);
                for (const auto& est : res.effects) out.effects.push_back(est.point);
                for (const auto& [label, ref] : truth.regime_reference) {
                    const auto it = res.regimes.find(label);
                    if (it == res.regimes.end()) continue;
                    const SampleSet est_pool = subsample_span(it->second.pooled(), kEdSubsampleCap);
                    const SampleSet ref_pool(ref.size(), 1, ref);
                    out.regime_ed[label] = energy_distance(est_pool, ref_pool);
                }
                out.ok = true;
                outputs[r] = std::move(out);
            } catch (const Error&) {
                outputs[r].ok = false;
            }
        },
        base_cfg.sim.threads);

    StudyResult result;
    for (const auto& o : outputs)
        if (!o.ok) ++result.failed_reps;
    const std::size_t ok_reps = reps - result.failed_reps;
    if (10 * result.failed_reps > reps)
        throw TrainError("run_replication_study: " + std::to_string(result.failed_reps) + " of " +
                         std::to_string(reps) + " replications failed (over 10%)");
    if (ok_reps == 0) throw TrainError("run_replication_study: all replications failed");

    std::size_t idx = 0;
    for (const EffectKind& kind : kinds) {
        for (const FunctionalSpec& f : proto.functionals) {
            StudyResult::Row row;
            row.method = study_method_name(method);
            row.effect = kind.name();
            row.functional = f.name();
            row.reps = ok_reps;
            row.truth = truth.has(kind, f) ? truth.at(kind, f).value
                                           : std::numeric_limits<double>::quiet_NaN();
            double sum = 0.0, sq = 0.0;
            for (const auto& o : outputs) {
                if (!o.ok) continue;
                sum += o.effects[idx];
                const double err = o.effects[idx] - row.truth;
                sq += err * err;
            }
            row.mean_estimate = sum / static_cast<double>(ok_reps);
            row.bias = row.mean_estimate - row.truth;
            row.rmse = std::sqrt(sq / static_cast<double>(ok_reps));
            result.rows.push_back(row);
            ++idx;
        }
    }

    for (const auto& [label, ref] : truth.regime_reference) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& o : outputs) {
            if (!o.ok) continue;
            const auto it = o.regime_ed.find(label);
            if (it == o.regime_ed.end()) continue;
            sum += it->second;
            ++count;
        }
        if (count > 0) result.regime_ed_mean[label] = sum / static_cast<double>(count);
    }
    return result;
}

} // namespace dcma
