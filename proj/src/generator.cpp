#include "dcma/generator.hpp"

#include "dcma/adam.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

namespace dcma {

using json = nlohmann::ordered_json;

std::string role_name(GeneratorRole role) {
    return role == GeneratorRole::Mediator ? "mediator" : "outcome";
}

GeneratorRole role_from_name(const std::string& name) {
    if (name == "mediator") return GeneratorRole::Mediator;
    if (name == "outcome") return GeneratorRole::Outcome;
    throw ArgumentError("unknown generator role '" + name + "'");
}

void GeneratorModel::validate() const {
    params.validate();
    if (params.input_dim() != input_dim())
        throw ShapeError("GeneratorModel: network input " + std::to_string(params.input_dim()) +
                         " != layout width " + std::to_string(input_dim()));
    const std::size_t want_out = role == GeneratorRole::Mediator ? n_mediators : 1;
    if (output_dim != want_out || params.output_dim() != output_dim)
        throw ShapeError("GeneratorModel: output dim " + std::to_string(params.output_dim()) +
                         " != expected " + std::to_string(want_out));
    if (standardization.z_mean.size() != d_z || standardization.m_mean.size() != n_mediators)
        throw ShapeError("GeneratorModel: standardization widths do not match layout");
}

void GeneratorModel::fill_cond_row(double a, std::span<const double> z,
                                   std::span<const double> m, double* out) const {
    if (z.size() != d_z)
        throw ShapeError("generator: covariate width " + std::to_string(z.size()) +
                         " != expected " + std::to_string(d_z));
    out[0] = a;
    for (std::size_t c = 0; c < d_z; ++c)
        out[1 + c] = (z[c] - standardization.z_mean[c]) / standardization.z_sd[c];
    if (role == GeneratorRole::Outcome) {
        if (m.size() != n_mediators)
            throw ShapeError("generator: mediator width " + std::to_string(m.size()) +
                             " != expected " + std::to_string(n_mediators));
        for (std::size_t c = 0; c < n_mediators; ++c)
            out[1 + d_z + c] = (m[c] - standardization.m_mean[c]) / standardization.m_sd[c];
    } else if (!m.empty()) {
        throw ShapeError("generator: mediator inputs passed to a mediator-role model");
    }
}

std::string GeneratorModel::id() const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(params_fingerprint(params)));
    return role_name(role) + ":" + buf;
}

void TrainConfig::validate() const {
    if (k_draws < 2) throw ConfigError("train config: K must be >= 2");
    if (!(validation_fraction > 0.0 && validation_fraction <= 0.5))
        throw ConfigError("train config: validation fraction must lie in (0, 0.5]");
    if (batch_size < 2) throw ConfigError("train config: batch size must be >= 2");
    if (max_epochs < 1) throw ConfigError("train config: max epochs must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("train config: learning rate must be positive");
    if (hidden.empty()) throw ConfigError("train config: need at least one hidden layer");
}

EsLoss es_loss_core(const MlpParams& params, const Matrix& cond, const Matrix& targets,
                    std::size_t k_draws, const Matrix& noise, bool want_grads) {
    const std::size_t n = cond.rows;
    const std::size_t k = k_draws;
    if (k < 2) throw ArgumentError("es_loss: K must be >= 2");
    if (targets.rows != n) throw ShapeError("es_loss: target rows != batch rows");
    if (noise.rows != n * k) throw ShapeError("es_loss: noise rows != batch rows * K");
    const std::size_t q = noise.cols;
    const std::size_t d = targets.cols;
    if (params.input_dim() != cond.cols + q)
        throw ShapeError("es_loss: network input " + std::to_string(params.input_dim()) +
                         " != cond+noise width " + std::to_string(cond.cols + q));

    // Stack the K noise draws under each observation's conditioning row.
    Matrix input(n * k, cond.cols + q);
    for (std::size_t i = 0; i < n; ++i) {
        const double* crow = cond.data.data() + i * cond.cols;
        for (std::size_t kk = 0; kk < k; ++kk) {
            double* row = input.data.data() + (i * k + kk) * input.cols;
            std::copy(crow, crow + cond.cols, row);
            const double* nrow = noise.data.data() + (i * k + kk) * q;
            std::copy(nrow, nrow + q, row + cond.cols);
        }
    }

    ForwardCache cache;
    const Matrix& u = mlp_forward_cached(params, input, cache);
    if (u.cols != d)
        throw ShapeError("es_loss: network output dim " + std::to_string(u.cols) +
                         " != target dim " + std::to_string(d));

    Matrix upstream;
    if (want_grads) upstream = Matrix(n * k, d);
    const double inv_n = 1.0 / static_cast<double>(n);
    const double pair_norm = 1.0 / static_cast<double>(k * (k - 1));
    const double data_norm = 1.0 / static_cast<double>(k);

    double loss = 0.0;
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < n; ++i) {
        const double* block = u.data.data() + i * k * d;
        double pair_sum = 0.0;
        for (std::size_t ka = 0; ka < k; ++ka) {
            const double* ua = block + ka * d;
            for (std::size_t kb = ka + 1; kb < k; ++kb) {
                const double* ub = block + kb * d;
                double s = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    diff[c] = ua[c] - ub[c];
                    s += diff[c] * diff[c];
                }
                const double dist = std::sqrt(s);
                pair_sum += dist;
                if (want_grads && dist > 0.0) {
                    // d(-ES)/dU: the pairwise term enters ES positively, so it
                    // contributes -pair_norm here; both orders of (ka, kb).
                    const double scale = inv_n * pair_norm / dist;
                    double* ga = upstream.data.data() + (i * k + ka) * d;
                    double* gb = upstream.data.data() + (i * k + kb) * d;
                    for (std::size_t c = 0; c < d; ++c) {
                        ga[c] -= scale * diff[c];
                        gb[c] += scale * diff[c];
                    }
                }
            }
        }
        const double* target = targets.data.data() + i * d;
        double data_sum = 0.0;
        for (std::size_t ka = 0; ka < k; ++ka) {
            const double* ua = block + ka * d;
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                diff[c] = ua[c] - target[c];
                s += diff[c] * diff[c];
            }
            const double dist = std::sqrt(s);
            data_sum += dist;
            if (want_grads && dist > 0.0) {
                const double scale = inv_n * data_norm / dist;
                double* ga = upstream.data.data() + (i * k + ka) * d;
                for (std::size_t c = 0; c < d; ++c) ga[c] += scale * diff[c];
            }
        }
        // ES_i = pair_sum/(K(K-1)) - data_sum/K; loss accumulates -ES.
        loss += data_sum * data_norm - pair_sum * pair_norm;
    }
    loss *= inv_n;

    EsLoss out;
    out.loss = loss;
    if (want_grads) out.grads = mlp_backward_cached(params, input, cache, upstream);
    return out;
}

namespace {

Matrix build_cond_matrix(const GeneratorModel& model, const Dataset& data) {
    Matrix cond(data.n(), model.cond_dim());
    for (std::size_t i = 0; i < data.n(); ++i) {
        std::span<const double> m_row =
            model.role == GeneratorRole::Outcome ? data.m.row(i) : std::span<const double>{};
        model.fill_cond_row(data.a[i], data.z.row(i), m_row, cond.data.data() + i * cond.cols);
    }
    return cond;
}

Matrix build_target_matrix(const GeneratorModel& model, const Dataset& data) {
    const auto& st = model.standardization;
    if (model.role == GeneratorRole::Mediator) {
        Matrix t(data.n(), data.m.cols);
        for (std::size_t i = 0; i < data.n(); ++i)
            for (std::size_t c = 0; c < data.m.cols; ++c)
                t(i, c) = (data.m(i, c) - st.m_mean[c]) / st.m_sd[c];
        return t;
    }
    Matrix t(data.n(), 1);
    for (std::size_t i = 0; i < data.n(); ++i) t(i, 0) = st.standardize_y(data.y[i]);
    return t;
}

constexpr std::uint64_t kTrainStreamTag = 0x747261696EULL; // per-role offset added below

// The mediator generator neither consumes nor emits Y, so a constant outcome
// column must not abort its fit; Y stats degrade to a unit placeholder there.
StandardizationParams fit_standardization_for_role(const Dataset& data, GeneratorRole role) {
    return fit_standardization(data, /*require_outcome_variation=*/role == GeneratorRole::Outcome);
}

} // namespace

EsLoss es_loss_batch(const GeneratorModel& model, const Dataset& batch, std::size_t k_draws,
                     RngStream& stream) {
    model.validate();
    const Matrix cond = build_cond_matrix(model, batch);
    const Matrix targets = build_target_matrix(model, batch);
    const Matrix noise = sample_standard_normal(stream, batch.n() * k_draws, model.noise_dim);
    EsLoss out = es_loss_core(model.params, cond, targets, k_draws, noise, true);
    if (!std::isfinite(out.loss)) throw TrainError("es_loss_batch: non-finite loss");
    return out;
}

GeneratorModel train_generator(const Dataset& data, GeneratorRole role, const TrainConfig& cfg) {
    cfg.validate();
    data.validate();
    const std::size_t n = data.n();

    GeneratorModel model;
    model.role = role;
    model.d_z = data.d_z();
    model.n_mediators = data.n_mediators();
    model.output_dim = role == GeneratorRole::Mediator ? data.n_mediators() : 1;
    model.noise_dim = cfg.noise_dim != 0 ? cfg.noise_dim : model.output_dim + 2;

    RngStream root(cfg.master_seed,
                   kTrainStreamTag + (role == GeneratorRole::Mediator ? 1 : 2));
    RngStream init_stream = rng_split(root, 0);
    RngStream noise_root = rng_split(root, 1);
    RngStream val_noise_proto = rng_split(root, 2);
    RngStream split_stream = rng_split(root, 3);
    RngStream shuffle_root = rng_split(root, 4);

    // Train / validation split.
    std::vector<std::uint32_t> perm = random_permutation(n, split_stream);
    std::size_t n_val = static_cast<std::size_t>(
        std::llround(cfg.validation_fraction * static_cast<double>(n)));
    n_val = std::max<std::size_t>(n_val, 1);
    if (n < 10 || n_val + 2 > n)
        throw ConfigError("train_generator: only " + std::to_string(n) +
                          " rows; too few for a train/validation split");
    const std::size_t n_train = n - n_val;
    std::vector<std::size_t> train_idx(perm.begin(), perm.begin() + n_train);
    std::vector<std::size_t> val_idx(perm.begin() + n_train, perm.end());
    const Dataset train = data.subset(train_idx);
    const Dataset val = data.subset(val_idx);

    model.standardization = fit_standardization_for_role(train, role);

    const Matrix train_cond = build_cond_matrix(model, train);
    const Matrix train_targets = build_target_matrix(model, train);
    const Matrix val_cond = build_cond_matrix(model, val);
    const Matrix val_targets = build_target_matrix(model, val);

    std::vector<std::size_t> dims;
    dims.push_back(model.input_dim());
    for (std::size_t h : cfg.hidden) dims.push_back(h);
    dims.push_back(model.output_dim);
    model.params = init_mlp(dims, Activation::Relu, init_stream);

    OptState opt = OptState::for_params(model.params, cfg.learning_rate);

    // Same validation noise every epoch so the early-stopping signal is
    // comparable across epochs (and reproducible).
    RngStream val_stream = val_noise_proto;
    const Matrix val_noise =
        sample_standard_normal(val_stream, n_val * cfg.k_draws, model.noise_dim);

    const std::size_t batch = std::min(cfg.batch_size, n_train);
    MlpParams best_params = model.params;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t best_epoch = 0;
    std::size_t since_best = 0;
    std::size_t epochs_run = 0;

    std::vector<std::size_t> order(n_train);
    Matrix bcond, btarget;
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        epochs_run = epoch;
        RngStream epoch_shuffle = rng_split(shuffle_root, epoch);
        std::vector<std::uint32_t> ep = random_permutation(n_train, epoch_shuffle);
        for (std::size_t i = 0; i < n_train; ++i) order[i] = ep[i];
        RngStream epoch_noise = rng_split(noise_root, epoch);

        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < n_train; start += batch, ++batch_index) {
            const std::size_t count = std::min(batch, n_train - start);
            if (count < 2) break; // a singleton tail cannot form pairwise terms
            bcond = Matrix(count, train_cond.cols);
            btarget = Matrix(count, train_targets.cols);
            for (std::size_t r = 0; r < count; ++r) {
                const std::size_t src = order[start + r];
                std::copy(train_cond.data.data() + src * train_cond.cols,
                          train_cond.data.data() + (src + 1) * train_cond.cols,
                          bcond.data.data() + r * bcond.cols);
                std::copy(train_targets.data.data() + src * train_targets.cols,
                          train_targets.data.data() + (src + 1) * train_targets.cols,
                          btarget.data.data() + r * btarget.cols);
            }
            RngStream batch_noise = rng_split(epoch_noise, batch_index);
            const Matrix noise =
                sample_standard_normal(batch_noise, count * cfg.k_draws, model.noise_dim);
            EsLoss step = es_loss_core(model.params, bcond, btarget, cfg.k_draws, noise, true);
            if (!std::isfinite(step.loss))
                throw TrainError("train_generator(" + role_name(role) + "): non-finite loss at epoch " +
                                 std::to_string(epoch) + " batch " + std::to_string(batch_index));
            adam_step_inplace(model.params, step.grads, opt);
        }

        const EsLoss val_eval =
            es_loss_core(model.params, val_cond, val_targets, cfg.k_draws, val_noise, false);
        if (!std::isfinite(val_eval.loss))
            throw TrainError("train_generator(" + role_name(role) +
                             "): non-finite validation loss at epoch " + std::to_string(epoch));
        if (val_eval.loss < best_val) {
            best_val = val_eval.loss;
            best_params = model.params;
            best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }

    model.params = std::move(best_params);
    model.meta.epochs_run = epochs_run;
    model.meta.best_epoch = best_epoch;
    model.meta.best_val_loss = best_val;
    model.validate();
    return model;
}

Matrix generate(const GeneratorModel& model, double a, std::span<const double> z,
                std::optional<std::span<const double>> m, std::size_t n_draws,
                RngStream& stream) {
    if ((model.role == GeneratorRole::Outcome) != m.has_value())
        throw ShapeError("generate: mediator values must be present exactly for outcome models");
    if (n_draws == 0) return Matrix(0, model.output_dim);
    Matrix input(n_draws, model.input_dim());
    std::vector<double> cond(model.cond_dim());
    model.fill_cond_row(a, z, m.has_value() ? *m : std::span<const double>{}, cond.data());
    const Matrix noise = sample_standard_normal(stream, n_draws, model.noise_dim);
    for (std::size_t r = 0; r < n_draws; ++r) {
        double* row = input.data.data() + r * input.cols;
        std::copy(cond.begin(), cond.end(), row);
        const double* nrow = noise.data.data() + r * model.noise_dim;
        std::copy(nrow, nrow + model.noise_dim, row + cond.size());
    }
    Matrix out = mlp_forward(model.params, input);
    const auto& st = model.standardization;
    if (model.role == GeneratorRole::Mediator) {
        for (std::size_t r = 0; r < out.rows; ++r)
            for (std::size_t c = 0; c < out.cols; ++c)
                out(r, c) = out(r, c) * st.m_sd[c] + st.m_mean[c];
    } else {
        for (double& v : out.data) v = st.destandardize_y(v);
    }
    return out;
}

std::vector<double> generate_outcomes(const GeneratorModel& model, double a, const Matrix& m_rows,
                                      std::span<const double> z, RngStream& stream) {
    if (model.role != GeneratorRole::Outcome)
        throw ShapeError("generate_outcomes: model role must be outcome");
    const std::size_t n = m_rows.rows;
    if (n == 0) return {};
    Matrix input(n, model.input_dim());
    const Matrix noise = sample_standard_normal(stream, n, model.noise_dim);
    for (std::size_t r = 0; r < n; ++r) {
        double* row = input.data.data() + r * input.cols;
        model.fill_cond_row(a, z, m_rows.row(r), row);
        const double* nrow = noise.data.data() + r * model.noise_dim;
        std::copy(nrow, nrow + model.noise_dim, row + model.cond_dim());
    }
    const Matrix out = mlp_forward(model.params, input);
    std::vector<double> y(n);
    for (std::size_t r = 0; r < n; ++r) y[r] = model.standardization.destandardize_y(out(r, 0));
    return y;
}

namespace {

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
    return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                  j.at("data").get<std::vector<double>>());
}

} // namespace

void save_checkpoint(const GeneratorModel& model, const std::string& path) {
    json j;
    j["format"] = "dcma-generator-v1";
    j["role"] = role_name(model.role);
    j["noise_dim"] = model.noise_dim;
    j["d_z"] = model.d_z;
    j["n_mediators"] = model.n_mediators;
    j["output_dim"] = model.output_dim;
    j["activation"] = activation_name(model.params.act);
    json layers = json::array();
    for (const auto& l : model.params.layers)
        layers.push_back(json{{"w", matrix_to_json(l.w)}, {"b", l.b}});
    j["layers"] = std::move(layers);
    j["standardization"] = {
        {"z_mean", model.standardization.z_mean}, {"z_sd", model.standardization.z_sd},
        {"m_mean", model.standardization.m_mean}, {"m_sd", model.standardization.m_sd},
        {"y_mean", model.standardization.y_mean}, {"y_sd", model.standardization.y_sd}};
    j["meta"] = {{"epochs_run", model.meta.epochs_run},
                 {"best_epoch", model.meta.best_epoch},
                 {"best_val_loss", model.meta.best_val_loss}};
    std::ofstream out(path);
    if (!out) throw DataError("save_checkpoint: cannot open " + path);
    out << j.dump(2) << "\n";
}

GeneratorModel load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_checkpoint: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError("load_checkpoint: parse failure in " + path + ": " + e.what());
    }
    if (j.value("format", "") != "dcma-generator-v1")
        throw DataError("load_checkpoint: unrecognized checkpoint format in " + path);
    GeneratorModel model;
    model.role = role_from_name(j.at("role").get<std::string>());
    model.noise_dim = j.at("noise_dim").get<std::size_t>();
    model.d_z = j.at("d_z").get<std::size_t>();
    model.n_mediators = j.at("n_mediators").get<std::size_t>();
    model.output_dim = j.at("output_dim").get<std::size_t>();
    model.params.act = activation_from_name(j.at("activation").get<std::string>());
    for (const auto& lj : j.at("layers")) {
        MlpParams::Layer l;
        l.w = matrix_from_json(lj.at("w"));
        l.b = lj.at("b").get<std::vector<double>>();
        model.params.layers.push_back(std::move(l));
    }
    const auto& sj = j.at("standardization");
    model.standardization.z_mean = sj.at("z_mean").get<std::vector<double>>();
    model.standardization.z_sd = sj.at("z_sd").get<std::vector<double>>();
    model.standardization.m_mean = sj.at("m_mean").get<std::vector<double>>();
    model.standardization.m_sd = sj.at("m_sd").get<std::vector<double>>();
    model.standardization.y_mean = sj.at("y_mean").get<double>();
    model.standardization.y_sd = sj.at("y_sd").get<double>();
    model.meta.epochs_run = j.at("meta").at("epochs_run").get<std::size_t>();
    model.meta.best_epoch = j.at("meta").at("best_epoch").get<std::size_t>();
    model.meta.best_val_loss = j.at("meta").at("best_val_loss").get<double>();
    model.validate();
    return model;
}

} // namespace dcma
