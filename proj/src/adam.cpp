#include "dcma/adam.hpp"

#include <cmath>

namespace dcma {

OptState OptState::for_params(const MlpParams& params, double lr, double b1, double b2,
                              double eps) {
    OptState s;
    s.learning_rate = lr;
    s.beta1 = b1;
    s.beta2 = b2;
    s.epsilon = eps;
    s.m = params.zeros_like();
    s.v = params.zeros_like();
    return s;
}

namespace {

void update_span(double* p, const double* g, double* m, double* v, std::size_t n,
                 const OptState& s, double c1, double c2, const char* path, std::size_t layer) {
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(g[k]))
            throw TrainError("adam_step: non-finite gradient at layers[" + std::to_string(layer) +
                             "]." + path + "[" + std::to_string(k) + "]");
        m[k] = s.beta1 * m[k] + (1.0 - s.beta1) * g[k];
        v[k] = s.beta2 * v[k] + (1.0 - s.beta2) * g[k] * g[k];
        const double mhat = m[k] / c1;
        const double vhat = v[k] / c2;
        p[k] -= s.learning_rate * mhat / (std::sqrt(vhat) + s.epsilon);
    }
}

} // namespace

void adam_step_inplace(MlpParams& params, const MlpParams& grads, OptState& state) {
    if (grads.layers.size() != params.layers.size())
        throw ShapeError("adam_step: gradient layer count mismatch");
    state.step += 1;
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        auto& pl = params.layers[i];
        const auto& gl = grads.layers[i];
        if (!pl.w.same_shape(gl.w) || pl.b.size() != gl.b.size())
            throw ShapeError("adam_step: gradient shape mismatch at layer " + std::to_string(i));
        update_span(pl.w.data.data(), gl.w.data.data(), state.m.layers[i].w.data.data(),
                    state.v.layers[i].w.data.data(), pl.w.data.size(), state, c1, c2, "w", i);
        update_span(pl.b.data(), gl.b.data(), state.m.layers[i].b.data(),
                    state.v.layers[i].b.data(), pl.b.size(), state, c1, c2, "b", i);
    }
}

std::pair<MlpParams, OptState> adam_step(const MlpParams& params, const MlpParams& grads,
                                         const OptState& state) {
    MlpParams p = params;
    OptState s = state;
    adam_step_inplace(p, grads, s);
    return {std::move(p), std::move(s)};
}

} // namespace dcma
