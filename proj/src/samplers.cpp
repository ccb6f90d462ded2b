#include "dcma/samplers.hpp"

namespace dcma {

ModelMediatorSampler::ModelMediatorSampler(const GeneratorModel& m) : model(&m) {
    if (m.role != GeneratorRole::Mediator)
        throw ArgumentError("ModelMediatorSampler: model role must be mediator");
}

Matrix ModelMediatorSampler::sample(double a, std::span<const double> z, std::size_t n_draws,
                                    RngStream& stream) const {
    return generate(*model, a, z, std::nullopt, n_draws, stream);
}

ModelOutcomeSampler::ModelOutcomeSampler(const GeneratorModel& m) : model(&m) {
    if (m.role != GeneratorRole::Outcome)
        throw ArgumentError("ModelOutcomeSampler: model role must be outcome");
}

std::vector<double> ModelOutcomeSampler::sample(double a, const Matrix& mediator_rows,
                                                std::span<const double> z,
                                                RngStream& stream) const {
    return generate_outcomes(*model, a, mediator_rows, z, stream);
}

std::vector<double> LinearGaussianOutcomeSampler::sample(double a, const Matrix& mediator_rows,
                                                         std::span<const double> z,
                                                         RngStream& stream) const {
    std::vector<double> out(mediator_rows.rows);
    for (std::size_t r = 0; r < mediator_rows.rows; ++r)
        out[r] = model.sample(a, mediator_rows.row(r), z, stream);
    return out;
}

PerturbedMediatorSampler::PerturbedMediatorSampler(const MediatorSampler& b,
                                                   std::vector<double> shift_, double scale_)
    : base(&b), shift(std::move(shift_)), scale(scale_) {
    if (shift.size() != base->n_mediators())
        throw ArgumentError("PerturbedMediatorSampler: shift width != mediator count");
}

Matrix PerturbedMediatorSampler::sample(double a, std::span<const double> z, std::size_t n_draws,
                                        RngStream& stream) const {
    Matrix out = base->sample(a, z, n_draws, stream);
    for (std::size_t r = 0; r < out.rows; ++r)
        for (std::size_t c = 0; c < out.cols; ++c) out(r, c) = out(r, c) * scale + shift[c];
    return out;
}

std::vector<double> PerturbedOutcomeSampler::sample(double a, const Matrix& mediator_rows,
                                                    std::span<const double> z,
                                                    RngStream& stream) const {
    std::vector<double> out = base->sample(a, mediator_rows, z, stream);
    for (double& v : out) v = v * scale + shift;
    return out;
}

} // namespace dcma
