#ifndef DCMA_MLP_HPP
#define DCMA_MLP_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dcma/matrix.hpp"
#include "dcma/rng.hpp"

namespace dcma {

enum class Activation { Relu, Tanh };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

/// Fully-connected network parameters. Hidden layers use `act`, the output
/// layer is linear. Layer i maps in_dim(i) -> out_dim(i) via x W^T + b.
struct MlpParams {
    struct Layer {
        Matrix w;              // out_dim x in_dim
        std::vector<double> b; // out_dim
    };
    std::vector<Layer> layers;
    Activation act = Activation::Relu;
    // Hidden layers always use `act`; the output layer is linear unless this
    // is set (single-layer nets with a clamped output need it).
    bool output_activation = false;

    std::size_t input_dim() const { return layers.front().w.cols; }
    std::size_t output_dim() const { return layers.back().w.rows; }
    std::size_t layer_count() const { return layers.size(); }

    /// Shape-compatible all-zero copy (gradient / moment accumulators).
    MlpParams zeros_like() const;

    /// Chained layer dimensions and finite entries.
    void validate() const;
};

/// He-style initialization for the given dims (input, hidden..., output).
MlpParams init_mlp(const std::vector<std::size_t>& dims, Activation act, RngStream& stream);

/// Pre-activations and activations kept from a forward pass for backprop.
struct ForwardCache {
    std::vector<Matrix> pre;  // per layer, before activation
    std::vector<Matrix> post; // per layer, after activation (last == output)
};

Matrix mlp_forward(const MlpParams& params, const Matrix& input);
Matrix mlp_forward_cached(const MlpParams& params, const Matrix& input, ForwardCache& cache);

/// Reverse-mode gradients of the forward map contracted with upstream_grad.
MlpParams mlp_backward(const MlpParams& params, const Matrix& input, const Matrix& upstream_grad);
/// Same, reusing a cache from mlp_forward_cached. `input_grad`, when not
/// null, receives d(loss)/d(input).
MlpParams mlp_backward_cached(const MlpParams& params, const Matrix& input,
                              const ForwardCache& cache, const Matrix& upstream_grad,
                              Matrix* input_grad = nullptr);

/// Visit every parameter in a fixed order (layer 0 weights row-major, layer 0
/// bias, layer 1 weights, ...). `path` names the component for diagnostics.
void visit_params(MlpParams& params,
                  const std::function<void(double&, const std::string& path)>& fn);
void visit_params(const MlpParams& params,
                  const std::function<void(double, const std::string& path)>& fn);

/// FNV-1a over the parameter bytes; used to tag model provenance.
std::uint64_t params_fingerprint(const MlpParams& params);

} // namespace dcma

#endif
