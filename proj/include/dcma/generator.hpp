#ifndef DCMA_GENERATOR_HPP
#define DCMA_GENERATOR_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcma/dataset.hpp"
#include "dcma/mlp.hpp"

namespace dcma {

enum class GeneratorRole { Mediator, Outcome };

std::string role_name(GeneratorRole role);
GeneratorRole role_from_name(const std::string& name);

/// Noise-driven conditional sampler. Network input layout is
/// [a | standardized z | standardized m (outcome only) | noise], output is the
/// standardized target (all S mediators jointly, or the scalar outcome).
struct GeneratorModel {
    GeneratorRole role = GeneratorRole::Mediator;
    MlpParams params;
    std::size_t noise_dim = 0;
    std::size_t d_z = 0;
    std::size_t n_mediators = 0; // S: output dim (mediator) or conditioning dim (outcome)
    std::size_t output_dim = 0;
    StandardizationParams standardization;

    struct TrainMeta {
        std::size_t epochs_run = 0;
        std::size_t best_epoch = 0;
        double best_val_loss = 0.0;
    } meta;

    std::size_t cond_dim() const {
        return 1 + d_z + (role == GeneratorRole::Outcome ? n_mediators : 0);
    }
    std::size_t input_dim() const { return cond_dim() + noise_dim; }

    /// Layout agreement between the descriptor and the network.
    void validate() const;

    /// Conditioning row in network units (standardizes z and m).
    void fill_cond_row(double a, std::span<const double> z, std::span<const double> m,
                       double* out) const;

    std::string id() const; // role + parameter fingerprint
};

/// Training protocol for the energy-score objective.
struct TrainConfig {
    std::size_t k_draws = 10;       // noise draws per observation per loss evaluation
    std::size_t max_epochs = 500;
    std::size_t batch_size = 128;
    double learning_rate = 2e-3;
    double validation_fraction = 0.2;
    std::size_t patience = 20;
    std::vector<std::size_t> hidden = {64, 64};
    std::size_t noise_dim = 0;      // 0 -> output_dim + 2
    std::uint64_t master_seed = 0;

    void validate() const;
};

/// Loss and gradients of the empirical energy-score objective on one batch:
/// -(1/n) sum_i ES(K model draws for observation i, target_i). Noise rows are
/// laid out observation-major: row i*K+k belongs to observation i.
struct EsLoss {
    double loss = 0.0;
    MlpParams grads;
};
EsLoss es_loss_core(const MlpParams& params, const Matrix& cond, const Matrix& targets,
                    std::size_t k_draws, const Matrix& noise, bool want_grads);

/// Spec-facing wrapper: standardizes the batch through the model's params and
/// draws fresh noise from the stream.
EsLoss es_loss_batch(const GeneratorModel& model, const Dataset& batch, std::size_t k_draws,
                     RngStream& stream);

/// Minibatch descent on the energy-score loss with validation-based early
/// stopping; returns the parameters from the best validation epoch.
/// Deterministic given cfg.master_seed.
GeneratorModel train_generator(const Dataset& data, GeneratorRole role, const TrainConfig& cfg);

/// n_draws conditional samples, destandardized to original units. m must be
/// present exactly when role == Outcome.
Matrix generate(const GeneratorModel& model, double a, std::span<const double> z,
                std::optional<std::span<const double>> m, std::size_t n_draws, RngStream& stream);

/// Batch variant for the outcome role: one draw per mediator row.
std::vector<double> generate_outcomes(const GeneratorModel& model, double a, const Matrix& m_rows,
                                      std::span<const double> z, RngStream& stream);

void save_checkpoint(const GeneratorModel& model, const std::string& path);
GeneratorModel load_checkpoint(const std::string& path);

} // namespace dcma

#endif
