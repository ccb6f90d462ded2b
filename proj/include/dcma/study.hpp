#ifndef DCMA_STUDY_HPP
#define DCMA_STUDY_HPP

#include <map>
#include <optional>

#include "dcma/pipeline.hpp"
#include "dcma/scenarios.hpp"

namespace dcma {

/// High-precision ground-truth effect values from the known mechanism.
struct OracleTruth {
    /// effect name -> functional name -> value (or curve).
    std::map<std::string, std::map<std::string, ContrastValue>> values;
    /// Deterministic subsamples of the pooled oracle draws per regime, kept
    /// for regime-level distribution comparisons (ablation studies).
    std::map<RegimeLabel, std::vector<double>> regime_reference;

    struct Meta {
        std::string scenario;
        std::size_t n_oracle = 0;
        std::size_t b_oracle = 0;
        std::uint64_t seed = 0;
    } meta;

    const ContrastValue& at(const EffectKind& kind, const FunctionalSpec& functional) const;
    bool has(const EffectKind& kind, const FunctionalSpec& functional) const;
};

struct OracleOptions {
    std::vector<int> ipse_indices;        // empty = all mediators
    bool collect_regime_reference = false;
    std::size_t reference_size = 20000;
    unsigned threads = 0;
};

/// Runs the forward simulation with the true conditional samplers in place of
/// learned models and applies every requested functional to every effect.
/// Regimes are processed in stages so n_oracle = 1e5 stays within memory.
OracleTruth oracle_truth(const ScenarioSpec& spec, std::size_t n_oracle, std::size_t b_oracle,
                         const std::vector<FunctionalSpec>& functionals,
                         const OracleOptions& opts = {});

enum class StudyMethod { DcmaEs, LinearGaussianAblation };
std::string study_method_name(StudyMethod m);

/// Bias / RMSE of repeated full-pipeline runs against the oracle truth, plus
/// per-regime energy distances between estimated and oracle interventional
/// samples when the truth carries regime references.
struct StudyResult {
    struct Row {
        std::string method;
        std::string effect;
        std::string functional;
        double truth = 0.0;
        double mean_estimate = 0.0;
        double bias = 0.0;
        double rmse = 0.0;
        std::size_t reps = 0;
    };
    std::vector<Row> rows;
    std::map<RegimeLabel, double> regime_ed_mean; // ED(estimated, oracle) averaged over reps
    std::size_t failed_reps = 0;
};

StudyResult run_replication_study(const ScenarioSpec& spec, StudyMethod method, std::size_t reps,
                                  const PipelineConfig& base_cfg, const OracleTruth& truth);

} // namespace dcma

#endif
