#include "dcma/mlp.hpp"

#include <cmath>
#include <cstring>

namespace dcma {

std::string activation_name(Activation a) {
    return a == Activation::Relu ? "relu" : "tanh";
}

Activation activation_from_name(const std::string& name) {
    if (name == "relu") return Activation::Relu;
    if (name == "tanh") return Activation::Tanh;
    throw ArgumentError("unknown activation '" + name + "' (expected relu or tanh)");
}

MlpParams MlpParams::zeros_like() const {
    MlpParams z;
    z.act = act;
    z.output_activation = output_activation;
    z.layers.reserve(layers.size());
    for (const auto& l : layers) {
        MlpParams::Layer zl;
        zl.w = Matrix(l.w.rows, l.w.cols);
        zl.b.assign(l.b.size(), 0.0);
        z.layers.push_back(std::move(zl));
    }
    return z;
}

void MlpParams::validate() const {
    if (layers.empty()) throw ShapeError("MlpParams: no layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& l = layers[i];
        if (l.b.size() != l.w.rows)
            throw ShapeError("MlpParams: layer " + std::to_string(i) + " bias length " +
                             std::to_string(l.b.size()) + " != out_dim " +
                             std::to_string(l.w.rows));
        if (i > 0 && l.w.cols != layers[i - 1].w.rows)
            throw ShapeError("MlpParams: layer " + std::to_string(i) + " in_dim " +
                             std::to_string(l.w.cols) + " != previous out_dim " +
                             std::to_string(layers[i - 1].w.rows));
        if (!l.w.all_finite())
            throw ShapeError("MlpParams: layer " + std::to_string(i) + " has non-finite weights");
        for (double v : l.b)
            if (!std::isfinite(v))
                throw ShapeError("MlpParams: layer " + std::to_string(i) + " has non-finite bias");
    }
}

MlpParams init_mlp(const std::vector<std::size_t>& dims, Activation act, RngStream& stream) {
    if (dims.size() < 2) throw ArgumentError("init_mlp: need at least input and output dims");
    MlpParams p;
    p.act = act;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        const std::size_t in = dims[i], out = dims[i + 1];
        MlpParams::Layer l;
        l.w = sample_standard_normal(stream, out, in);
        const bool is_output = (i + 2 == dims.size());
        const double scale =
            is_output ? std::sqrt(1.0 / static_cast<double>(in))
                      : std::sqrt((act == Activation::Relu ? 2.0 : 1.0) / static_cast<double>(in));
        for (double& v : l.w.data) v *= scale;
        l.b.assign(out, 0.0);
        p.layers.push_back(std::move(l));
    }
    return p;
}

namespace {

void apply_activation(Matrix& m, Activation act) {
    if (act == Activation::Relu) {
        for (double& v : m.data)
            if (v < 0.0) v = 0.0;
    } else {
        for (double& v : m.data) v = std::tanh(v);
    }
}

void check_input(const MlpParams& params, const Matrix& input) {
    if (input.cols != params.input_dim())
        throw ShapeError("mlp_forward: input has " + std::to_string(input.cols) +
                         " columns, layer 0 expects " + std::to_string(params.input_dim()));
}

Matrix affine(const MlpParams::Layer& l, const Matrix& x) {
    Matrix z = matmul_bt(x, l.w);
    for (std::size_t r = 0; r < z.rows; ++r) {
        double* row = z.data.data() + r * z.cols;
        for (std::size_t c = 0; c < z.cols; ++c) row[c] += l.b[c];
    }
    return z;
}

} // namespace

Matrix mlp_forward(const MlpParams& params, const Matrix& input) {
    check_input(params, input);
    Matrix cur = input;
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        cur = affine(params.layers[i], cur);
        if (i + 1 < params.layers.size() || params.output_activation)
            apply_activation(cur, params.act);
    }
    return cur;
}

Matrix mlp_forward_cached(const MlpParams& params, const Matrix& input, ForwardCache& cache) {
    check_input(params, input);
    const std::size_t nl = params.layers.size();
    cache.pre.assign(nl, Matrix());
    cache.post.assign(nl, Matrix());
    const Matrix* cur = &input;
    for (std::size_t i = 0; i < nl; ++i) {
        cache.pre[i] = affine(params.layers[i], *cur);
        cache.post[i] = cache.pre[i];
        if (i + 1 < nl || params.output_activation) apply_activation(cache.post[i], params.act);
        cur = &cache.post[i];
    }
    return cache.post.back();
}

MlpParams mlp_backward(const MlpParams& params, const Matrix& input, const Matrix& upstream_grad) {
    ForwardCache cache;
    mlp_forward_cached(params, input, cache);
    return mlp_backward_cached(params, input, cache, upstream_grad);
}

MlpParams mlp_backward_cached(const MlpParams& params, const Matrix& input,
                              const ForwardCache& cache, const Matrix& upstream_grad,
                              Matrix* input_grad) {
    const std::size_t nl = params.layers.size();
    if (upstream_grad.rows != input.rows || upstream_grad.cols != params.output_dim())
        throw ShapeError("mlp_backward: upstream grad is " + std::to_string(upstream_grad.rows) +
                         "x" + std::to_string(upstream_grad.cols) + ", expected " +
                         std::to_string(input.rows) + "x" + std::to_string(params.output_dim()));

    MlpParams grads = params.zeros_like();
    Matrix delta = upstream_grad; // d loss / d pre-activation of current layer
    if (params.output_activation) {
        const Matrix& pre = cache.pre[nl - 1];
        if (params.act == Activation::Relu) {
            for (std::size_t k = 0; k < delta.data.size(); ++k)
                if (pre.data[k] <= 0.0) delta.data[k] = 0.0;
        } else {
            const Matrix& post = cache.post[nl - 1];
            for (std::size_t k = 0; k < delta.data.size(); ++k)
                delta.data[k] *= 1.0 - post.data[k] * post.data[k];
        }
    }
    for (std::size_t li = nl; li-- > 0;) {
        const Matrix& below = (li == 0) ? input : cache.post[li - 1];
        grads.layers[li].w = matmul_at(delta, below);
        auto& db = grads.layers[li].b;
        for (std::size_t r = 0; r < delta.rows; ++r) {
            const double* row = delta.data.data() + r * delta.cols;
            for (std::size_t c = 0; c < delta.cols; ++c) db[c] += row[c];
        }
        if (li == 0) {
            if (input_grad) *input_grad = matmul(delta, params.layers[0].w);
            break;
        }
        Matrix da = matmul(delta, params.layers[li].w); // grad wrt activation below
        const Matrix& pre = cache.pre[li - 1];
        if (params.act == Activation::Relu) {
            for (std::size_t k = 0; k < da.data.size(); ++k)
                if (pre.data[k] <= 0.0) da.data[k] = 0.0;
        } else {
            const Matrix& post = cache.post[li - 1];
            for (std::size_t k = 0; k < da.data.size(); ++k)
                da.data[k] *= 1.0 - post.data[k] * post.data[k];
        }
        delta = std::move(da);
    }
    return grads;
}

void visit_params(MlpParams& params,
                  const std::function<void(double&, const std::string& path)>& fn) {
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        auto& l = params.layers[i];
        const std::string wp = "layers[" + std::to_string(i) + "].w";
        for (double& v : l.w.data) fn(v, wp);
        const std::string bp = "layers[" + std::to_string(i) + "].b";
        for (double& v : l.b) fn(v, bp);
    }
}

void visit_params(const MlpParams& params,
                  const std::function<void(double, const std::string& path)>& fn) {
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        const auto& l = params.layers[i];
        const std::string wp = "layers[" + std::to_string(i) + "].w";
        for (double v : l.w.data) fn(v, wp);
        const std::string bp = "layers[" + std::to_string(i) + "].b";
        for (double v : l.b) fn(v, bp);
    }
}

std::uint64_t params_fingerprint(const MlpParams& params) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto absorb = [&h](const void* p, std::size_t n) {
        const unsigned char* bytes = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& l : params.layers) {
        absorb(l.w.data.data(), l.w.data.size() * sizeof(double));
        absorb(l.b.data(), l.b.size() * sizeof(double));
    }
    return h;
}

} // namespace dcma
