#ifndef DCMA_PIPELINE_HPP
#define DCMA_PIPELINE_HPP

#include <optional>

#include "dcma/effects.hpp"
#include "dcma/generator.hpp"
#include "dcma/linear_gaussian.hpp"
#include "dcma/simulate.hpp"

namespace dcma {

enum class OutcomeModelKind { MlpEs, LinearGaussian };

std::string outcome_model_name(OutcomeModelKind kind);
OutcomeModelKind outcome_model_from_name(const std::string& name);

/// Everything needed to go from a dataset to effect estimates: training
/// protocol, simulation protocol, and the functionals to evaluate. The
/// mediator generator is always the energy-score MLP; the outcome side can be
/// swapped for the linear-Gaussian ablation.
struct PipelineConfig {
    TrainConfig train;
    SimConfig sim;
    std::vector<FunctionalSpec> functionals = {FunctionalSpec::mean(), FunctionalSpec::ed()};
    OutcomeModelKind outcome_model = OutcomeModelKind::MlpEs;

    void validate() const;
    /// ITE, IDE, then IPSE_s for each requested pathway.
    std::vector<EffectKind> effect_kinds() const;
};

struct PipelineResult {
    GeneratorModel mediator_model;
    std::optional<GeneratorModel> outcome_model;           // MlpEs path
    std::optional<LinearGaussianModel> outcome_linear;     // LinearGaussian path
    RegimeSamples regimes;
    std::vector<EffectEstimate> effects;
};

/// Train, simulate, and evaluate all configured (effect, functional) pairs.
PipelineResult run_pipeline(const Dataset& data, const PipelineConfig& cfg);

/// Effect values only (used by resample refits, where models are discarded).
std::vector<EffectEstimate> run_pipeline_effects(const Dataset& data, const PipelineConfig& cfg);

/// Percentile bootstrap: resample rows with replacement, rerun the full
/// pipeline per resample (averaging over refits), and attach level-alpha
/// percentile intervals to the original-sample point estimates. Resamples
/// whose refits all fail are skipped; more than 20% skipped is an error.
std::vector<EffectEstimate> bootstrap_effects(const Dataset& data, const PipelineConfig& pipeline,
                                              const BootstrapConfig& cfg);

} // namespace dcma

#endif
