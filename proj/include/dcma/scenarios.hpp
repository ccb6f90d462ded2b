#ifndef DCMA_SCENARIOS_HPP
#define DCMA_SCENARIOS_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <string>

#include "dcma/dataset.hpp"
#include "dcma/samplers.hpp"

namespace dcma {

enum class ScenarioId { S1, S2 };

std::string scenario_name(ScenarioId id);
ScenarioId scenario_from_name(const std::string& name);

/// Synthetic data-generating process. Constants default to the two study
/// scenarios; overriding them (e.g. zeroing treatment coefficients) yields
/// test variants such as the null scenario.
struct ScenarioSpec {
    ScenarioId id = ScenarioId::S1;
    std::size_t n = 5000;
    std::uint64_t seed = 0;

    // Single mediator, bimodal outcome. The outcome intercept under
    // treatment branches on the sign of z (<= 0 takes the high branch).
    struct S1 {
        double med_intercept = 0.5;
        double med_a = 1.0;
        double med_z = 0.3;
        double med_sd = 0.5;
        double y_intercept_a0 = 4.3;
        double y_intercept_a1_zpos = 2.0;
        double y_intercept_a1_zneg = 6.0;
        double y_a = 0.3;
        double y_m = 0.5;
        double y_z = 0.2;
        double y_sd = 1.0;
    } s1;

    // Five dependent mediators; outcome has the sin(m1 m2) interaction.
    struct S2 {
        std::array<double, 5> intercept = {0.5, 0.5, 0.5, 0.5, 0.5};
        std::array<double, 5> b_a = {1.0, 0.8, 0.6, 0.4, 0.2};
        std::array<double, 5> b_z = {0.3, 0.3, 0.2, 0.2, 0.1};
        double cov_decay = 0.6; // Sigma_ij = cov_decay^|i-j|
        double y_intercept = 1.0;
        double y_a = 0.6;
        double y_m = 0.2;
        double y_z = 0.2;
        double y_sd = 1.0;
    } s2;

    std::size_t n_mediators() const { return id == ScenarioId::S1 ? 1 : 5; }

    /// Variant with every treatment coefficient zeroed (and the S1 outcome
    /// branch collapsed), so all causal pathways vanish.
    ScenarioSpec null_variant() const;

    void validate() const;
};

/// Draws (A, Z, M, Y) from the mechanism; pure function of the spec.
Dataset generate_scenario(const ScenarioSpec& spec);

/// Known-mechanism conditional samplers (the oracle's fm / fy).
std::unique_ptr<MediatorSampler> truth_mediator_sampler(const ScenarioSpec& spec);
std::unique_ptr<OutcomeSampler> truth_outcome_sampler(const ScenarioSpec& spec);

/// Lower-triangular Cholesky factor of the S2 mediator noise covariance.
Matrix s2_noise_cholesky(const ScenarioSpec& spec);

} // namespace dcma

#endif
