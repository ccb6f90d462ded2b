#ifndef DCMA_ADAM_HPP
#define DCMA_ADAM_HPP

#include <utility>

#include "dcma/mlp.hpp"

namespace dcma {

/// Adaptive-moment optimizer state; accumulators mirror the parameter shapes.
struct OptState {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t step = 0;
    MlpParams m; // first moments
    MlpParams v; // second moments

    static OptState for_params(const MlpParams& params, double lr = 1e-3, double b1 = 0.9,
                               double b2 = 0.999, double eps = 1e-8);
};

/// Bias-corrected adaptive-moment update, in place. Throws TrainError with the
/// parameter path on non-finite gradients.
void adam_step_inplace(MlpParams& params, const MlpParams& grads, OptState& state);

/// Value-semantics variant.
std::pair<MlpParams, OptState> adam_step(const MlpParams& params, const MlpParams& grads,
                                         const OptState& state);

} // namespace dcma

#endif
