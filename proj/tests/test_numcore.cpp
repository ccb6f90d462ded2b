#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "dcma/adam.hpp"
#include "dcma/mlp.hpp"
#include "dcma/rng.hpp"

using namespace dcma;

namespace {

MlpParams single_layer(Matrix w, std::vector<double> b, Activation act, bool out_act) {
    MlpParams p;
    p.layers.push_back({std::move(w), std::move(b)});
    p.act = act;
    p.output_activation = out_act;
    return p;
}

std::vector<double> collect(const MlpParams& p) {
    std::vector<double> out;
    visit_params(p, [&](double v, const std::string&) { out.push_back(v); });
    return out;
}

// Central finite differences of loss(params) = sum(upstream .* forward(params, x)).
double fd_check_max_rel_error(MlpParams params, const Matrix& input, const Matrix& upstream,
                              double h) {
    auto loss = [&](const MlpParams& p) {
        const Matrix out = mlp_forward(p, input);
        double s = 0.0;
        for (std::size_t k = 0; k < out.data.size(); ++k) s += out.data[k] * upstream.data[k];
        return s;
    };
    const MlpParams analytic = mlp_backward(params, input, upstream);
    const std::vector<double> grad = collect(analytic);

    std::vector<double*> slots;
    visit_params(params, [&](double& v, const std::string&) { slots.push_back(&v); });

    double worst = 0.0;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        const double orig = *slots[k];
        *slots[k] = orig + h;
        const double up = loss(params);
        *slots[k] = orig - h;
        const double down = loss(params);
        *slots[k] = orig;
        const double fd = (up - down) / (2.0 * h);
        const double denom = std::max({std::abs(fd), std::abs(grad[k]), 1e-3});
        worst = std::max(worst, std::abs(fd - grad[k]) / denom);
    }
    return worst;
}

} // namespace

TEST_CASE("mlp_forward identity layer") {
    MlpParams p = single_layer(Matrix(2, 2, {1, 0, 0, 1}), {0, 0}, Activation::Relu, false);
    const Matrix out = mlp_forward(p, Matrix(1, 2, {1, 2}));
    CHECK(out(0, 0) == doctest::Approx(1.0));
    CHECK(out(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("mlp_forward relu clamps single-layer output") {
    MlpParams p = single_layer(Matrix(1, 1, {2.0}), {1.0}, Activation::Relu, true);
    const Matrix out = mlp_forward(p, Matrix(1, 1, {-3.0}));
    CHECK(out(0, 0) == 0.0); // 2*(-3)+1 = -5, clamped
}

TEST_CASE("mlp_forward tanh hidden at zero input") {
    MlpParams p;
    p.layers.push_back({Matrix(2, 1, {1, 1}), {0, 0}});
    p.layers.push_back({Matrix(1, 2, {1, 1}), {0}});
    p.act = Activation::Tanh;
    const Matrix out = mlp_forward(p, Matrix(1, 1, {0.0}));
    CHECK(out(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("mlp_forward shape error names the layer") {
    MlpParams p = single_layer(Matrix(1, 2, {1, 1}), {0}, Activation::Relu, false);
    CHECK_THROWS_WITH_AS(mlp_forward(p, Matrix(1, 3, {1, 2, 3})), doctest::Contains("layer 0"),
                         ShapeError);
}

TEST_CASE("mlp_forward is deterministic in (params, input)") {
    RngStream s(7, 1);
    const MlpParams p = init_mlp({3, 8, 2}, Activation::Relu, s);
    RngStream xs(7, 2);
    const Matrix x = sample_standard_normal(xs, 5, 3);
    const Matrix a = mlp_forward(p, x);
    const Matrix b = mlp_forward(p, x);
    CHECK(a.data == b.data);
}

TEST_CASE("mlp_backward zero upstream gives zero grads") {
    RngStream s(3, 0);
    const MlpParams p = init_mlp({2, 4, 1}, Activation::Tanh, s);
    RngStream xs(3, 1);
    const Matrix x = sample_standard_normal(xs, 3, 2);
    const MlpParams g = mlp_backward(p, x, Matrix(3, 1));
    for (double v : collect(g)) CHECK(v == 0.0);
}

TEST_CASE("mlp_backward 1x1 linear chain rule") {
    MlpParams p = single_layer(Matrix(1, 1, {0.7}), {0.1}, Activation::Relu, false);
    const MlpParams g = mlp_backward(p, Matrix(1, 1, {3.0}), Matrix(1, 1, {1.0}));
    CHECK(g.layers[0].w(0, 0) == doctest::Approx(3.0)); // dw = x
    CHECK(g.layers[0].b[0] == doctest::Approx(1.0));    // db = 1
}

TEST_CASE("mlp_backward upstream shape mismatch") {
    MlpParams p = single_layer(Matrix(1, 1, {1.0}), {0.0}, Activation::Relu, false);
    CHECK_THROWS_AS(mlp_backward(p, Matrix(2, 1, {1, 2}), Matrix(1, 1, {1.0})), ShapeError);
}

TEST_CASE("mlp_backward matches central finite differences") {
    // Random networks up to 3 hidden layers, widths <= 32.
    const std::vector<std::vector<std::size_t>> shapes = {
        {3, 7, 1}, {2, 16, 8, 2}, {4, 32, 16, 8, 1}};
    std::uint64_t seed = 41;
    for (const auto& dims : shapes) {
        for (Activation act : {Activation::Tanh, Activation::Relu}) {
            RngStream ps(seed, 0);
            MlpParams p = init_mlp(dims, act, ps);
            RngStream xs(seed, 1);
            const Matrix x = sample_standard_normal(xs, 6, dims.front());
            RngStream us(seed, 2);
            const Matrix upstream = sample_standard_normal(us, 6, dims.back());
            const double worst = fd_check_max_rel_error(p, x, upstream, 1e-5);
            CHECK(worst < 1e-4);
            ++seed;
        }
    }
}

TEST_CASE("adam zero gradient leaves parameters unchanged") {
    RngStream s(5, 0);
    MlpParams p = init_mlp({2, 4, 1}, Activation::Relu, s);
    const std::vector<double> before = collect(p);
    OptState opt = OptState::for_params(p);
    adam_step_inplace(p, p.zeros_like(), opt);
    CHECK(collect(p) == before);
}

TEST_CASE("adam first step moves by about lr for unit gradient") {
    MlpParams p = single_layer(Matrix(1, 1, {0.0}), {0.0}, Activation::Relu, false);
    MlpParams g = p.zeros_like();
    g.layers[0].w(0, 0) = 1.0;
    OptState opt = OptState::for_params(p, 0.1);
    auto [p2, opt2] = adam_step(p, g, opt);
    CHECK(p2.layers[0].w(0, 0) == doctest::Approx(-0.1).epsilon(1e-6));
    CHECK(opt2.step == 1);
    CHECK(p.layers[0].w(0, 0) == 0.0); // value semantics: original untouched
}

TEST_CASE("adam keeps identical tensors identical") {
    MlpParams p;
    p.layers.push_back({Matrix(2, 2, {0.3, -0.4, 0.3, -0.4}), {0.1, 0.1}});
    MlpParams g = p.zeros_like();
    g.layers[0].w = Matrix(2, 2, {1.0, -2.0, 1.0, -2.0});
    g.layers[0].b = {0.5, 0.5};
    OptState opt = OptState::for_params(p, 0.01);
    for (int step = 0; step < 50; ++step) adam_step_inplace(p, g, opt);
    CHECK(p.layers[0].w(0, 0) == p.layers[0].w(1, 0));
    CHECK(p.layers[0].w(0, 1) == p.layers[0].w(1, 1));
    CHECK(p.layers[0].b[0] == p.layers[0].b[1]);
}

TEST_CASE("adam non-finite gradient reports the parameter path") {
    MlpParams p = single_layer(Matrix(1, 1, {0.0}), {0.0}, Activation::Relu, false);
    MlpParams g = p.zeros_like();
    g.layers[0].w(0, 0) = std::numeric_limits<double>::quiet_NaN();
    OptState opt = OptState::for_params(p);
    CHECK_THROWS_WITH_AS(adam_step_inplace(p, g, opt), doctest::Contains("layers[0].w"),
                         TrainError);
}

TEST_CASE("adam drives (w-3)^2 to the minimum") {
    MlpParams p = single_layer(Matrix(1, 1, {0.0}), {}, Activation::Relu, false);
    OptState opt = OptState::for_params(p, 0.1);
    for (int step = 0; step < 500; ++step) {
        MlpParams g = p.zeros_like();
        g.layers[0].w(0, 0) = 2.0 * (p.layers[0].w(0, 0) - 3.0);
        adam_step_inplace(p, g, opt);
    }
    CHECK(std::abs(p.layers[0].w(0, 0) - 3.0) < 0.01);
}

TEST_CASE("rng same stream reproduces draws") {
    RngStream a = rng_split(RngStream(42, 0), 3);
    RngStream b = rng_split(RngStream(42, 0), 3);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("rng sibling streams are uncorrelated") {
    RngStream parent(123, 0);
    RngStream c0 = rng_split(parent, 0);
    RngStream c1 = rng_split(parent, 1);
    double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        const double x = c0.next_normal();
        const double y = c1.next_normal();
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double vx = sxx / n - (sx / n) * (sx / n);
    const double vy = syy / n - (sy / n) * (sy / n);
    CHECK(std::abs(cov / std::sqrt(vx * vy)) < 0.1);
}

TEST_CASE("rng split-of-split is evaluation-order independent") {
    const RngStream parent(9, 4);
    RngStream path_a = rng_split(rng_split(parent, 1), 2);
    // Consuming draws elsewhere must not change the child stream.
    RngStream sibling = rng_split(parent, 7);
    for (int i = 0; i < 10; ++i) sibling.next_u64();
    RngStream path_b = rng_split(rng_split(parent, 1), 2);
    for (int i = 0; i < 50; ++i) CHECK(path_a.next_u64() == path_b.next_u64());
}

TEST_CASE("sample_standard_normal moments") {
    RngStream s(2718, 5);
    const Matrix draws = sample_standard_normal(s, 100000, 1);
    double sum = 0, sq = 0;
    for (double v : draws.data) {
        sum += v;
        sq += v * v;
    }
    const double mean = sum / 1e5;
    const double var = sq / 1e5 - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("sample_standard_normal is bit-identical across runs") {
    RngStream a(77, 8);
    RngStream b(77, 8);
    const Matrix ma = sample_standard_normal(a, 13, 7);
    const Matrix mb = sample_standard_normal(b, 13, 7);
    CHECK(ma.data == mb.data);
}

TEST_CASE("disjoint streams pass a two-sample mean test") {
    RngStream a(31, 1);
    RngStream b(31, 2);
    const int n = 10000;
    double sa = 0, sb = 0;
    for (int i = 0; i < n; ++i) {
        sa += a.next_normal();
        sb += b.next_normal();
    }
    const double zstat = (sa / n - sb / n) / std::sqrt(2.0 / n);
    CHECK(std::abs(zstat) < 2.576); // alpha = 0.01
}

TEST_CASE("sample_standard_normal rejects empty shapes") {
    RngStream s(1, 1);
    CHECK_THROWS_AS(sample_standard_normal(s, 0, 3), ArgumentError);
}

TEST_CASE("random_permutation is a permutation") {
    RngStream s(5, 5);
    const auto perm = random_permutation(257, s);
    std::vector<bool> seen(257, false);
    for (auto v : perm) {
        CHECK(!seen[v]);
        seen[v] = true;
    }
}

TEST_CASE("matrix data length invariant") {
    CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0}), ShapeError);
}

TEST_CASE("matmul dimension checks") {
    CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), ShapeError);
    const Matrix c = matmul(Matrix(2, 3, {1, 2, 3, 4, 5, 6}), Matrix(3, 1, {1, 1, 1}));
    CHECK(c(0, 0) == 6);
    CHECK(c(1, 0) == 15);
}
