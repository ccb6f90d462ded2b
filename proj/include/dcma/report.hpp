#ifndef DCMA_REPORT_HPP
#define DCMA_REPORT_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcma/effects.hpp"
#include "dcma/study.hpp"

namespace dcma {

/// {effect, functional, params, point, lower, upper, curve?, meta} per entry.
nlohmann::ordered_json effect_to_json(const EffectEstimate& est);
nlohmann::ordered_json effects_to_json(const std::vector<EffectEstimate>& effects,
                                       const nlohmann::ordered_json& run_meta);

/// Flat CSV: effect,functional,param,point,lower,upper (curves expand to one
/// row per grid point with param = tau).
void write_effects_csv(const std::vector<EffectEstimate>& effects, const std::string& path);

void write_effects_json(const std::vector<EffectEstimate>& effects,
                        const nlohmann::ordered_json& run_meta, const std::string& path);

nlohmann::ordered_json oracle_to_json(const OracleTruth& truth);
void write_oracle_json(const OracleTruth& truth, const std::string& path);

/// method,metric,effect,truth,mean_estimate,bias,rmse rows plus regime ED rows.
void write_study_csv(const std::vector<StudyResult>& studies, const std::string& path);
nlohmann::ordered_json study_to_json(const StudyResult& study);

nlohmann::ordered_json functional_to_json(const FunctionalSpec& f);
FunctionalSpec functional_from_json(const nlohmann::json& j);

} // namespace dcma

#endif
