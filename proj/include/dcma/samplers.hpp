#ifndef DCMA_SAMPLERS_HPP
#define DCMA_SAMPLERS_HPP

#include <memory>
#include <string>

#include "dcma/generator.hpp"
#include "dcma/linear_gaussian.hpp"

namespace dcma {

/// Conditional mediator law: n_draws joint samples of all S mediators given
/// (a, z), in original units. Forward simulation is written against this
/// interface so learned models, known mechanisms, and perturbed variants are
/// interchangeable.
struct MediatorSampler {
    virtual ~MediatorSampler() = default;
    virtual std::size_t n_mediators() const = 0;
    virtual Matrix sample(double a, std::span<const double> z, std::size_t n_draws,
                          RngStream& stream) const = 0;
    virtual std::string id() const = 0;
};

/// Conditional outcome law: one outcome draw per mediator row, in original
/// units.
struct OutcomeSampler {
    virtual ~OutcomeSampler() = default;
    virtual std::vector<double> sample(double a, const Matrix& mediator_rows,
                                       std::span<const double> z, RngStream& stream) const = 0;
    virtual std::string id() const = 0;
};

struct ModelMediatorSampler final : MediatorSampler {
    const GeneratorModel* model;
    explicit ModelMediatorSampler(const GeneratorModel& m);
    std::size_t n_mediators() const override { return model->n_mediators; }
    Matrix sample(double a, std::span<const double> z, std::size_t n_draws,
                  RngStream& stream) const override;
    std::string id() const override { return model->id(); }
};

struct ModelOutcomeSampler final : OutcomeSampler {
    const GeneratorModel* model;
    explicit ModelOutcomeSampler(const GeneratorModel& m);
    std::vector<double> sample(double a, const Matrix& mediator_rows, std::span<const double> z,
                               RngStream& stream) const override;
    std::string id() const override { return model->id(); }
};

struct LinearGaussianOutcomeSampler final : OutcomeSampler {
    LinearGaussianModel model;
    explicit LinearGaussianOutcomeSampler(LinearGaussianModel m) : model(std::move(m)) {}
    std::vector<double> sample(double a, const Matrix& mediator_rows, std::span<const double> z,
                               RngStream& stream) const override;
    std::string id() const override { return "linear_gaussian"; }
};

/// Affine output perturbation out * scale + shift; used by the error
/// decomposition diagnostics to inject controlled model error.
struct PerturbedMediatorSampler final : MediatorSampler {
    const MediatorSampler* base;
    std::vector<double> shift; // per mediator
    double scale = 1.0;
    PerturbedMediatorSampler(const MediatorSampler& b, std::vector<double> shift_, double scale_);
    std::size_t n_mediators() const override { return base->n_mediators(); }
    Matrix sample(double a, std::span<const double> z, std::size_t n_draws,
                  RngStream& stream) const override;
    std::string id() const override { return base->id() + "+perturbed"; }
};

struct PerturbedOutcomeSampler final : OutcomeSampler {
    const OutcomeSampler* base;
    double shift = 0.0;
    double scale = 1.0;
    PerturbedOutcomeSampler(const OutcomeSampler& b, double shift_, double scale_)
        : base(&b), shift(shift_), scale(scale_) {}
    std::vector<double> sample(double a, const Matrix& mediator_rows, std::span<const double> z,
                               RngStream& stream) const override;
    std::string id() const override { return base->id() + "+perturbed"; }
};

} // namespace dcma

#endif
