#include "dcma/scenarios.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace dcma {

std::string scenario_name(ScenarioId id) { return id == ScenarioId::S1 ? "S1" : "S2"; }

ScenarioId scenario_from_name(const std::string& name) {
    if (name == "S1" || name == "s1") return ScenarioId::S1;
    if (name == "S2" || name == "s2") return ScenarioId::S2;
    throw ConfigError("unknown scenario '" + name + "' (expected S1 or S2)");
}

ScenarioSpec ScenarioSpec::null_variant() const {
    ScenarioSpec v = *this;
    v.s1.med_a = 0.0;
    v.s1.y_a = 0.0;
    v.s1.y_intercept_a1_zpos = v.s1.y_intercept_a0;
    v.s1.y_intercept_a1_zneg = v.s1.y_intercept_a0;
    v.s2.b_a = {0.0, 0.0, 0.0, 0.0, 0.0};
    v.s2.y_a = 0.0;
    return v;
}

void ScenarioSpec::validate() const {
    if (n < 1) throw ConfigError("scenario: n must be >= 1");
    if (s1.med_sd < 0 || s1.y_sd < 0 || s2.y_sd < 0)
        throw ConfigError("scenario: standard deviations must be nonnegative");
    if (id == ScenarioId::S2) s2_noise_cholesky(*this); // positive definiteness
}

Matrix s2_noise_cholesky(const ScenarioSpec& spec) {
    constexpr int s = 5;
    Eigen::MatrixXd sigma(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            sigma(i, j) = std::pow(spec.s2.cov_decay, std::abs(i - j));
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw ConfigError("scenario S2: mediator covariance is not positive definite");
    const Eigen::MatrixXd l = llt.matrixL();
    Matrix out(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) out(i, j) = l(i, j);
    return out;
}

namespace {

constexpr std::uint64_t kScenarioTag = 0x5343454EULL;

double s1_outcome_mean(const ScenarioSpec::S1& c, double a, double m, double z) {
    double intercept;
    if (a == 0.0)
        intercept = c.y_intercept_a0;
    else
        intercept = (z <= 0.0) ? c.y_intercept_a1_zneg : c.y_intercept_a1_zpos;
    return intercept + c.y_a * a + c.y_m * m + c.y_z * z;
}

double s2_outcome_mean(const ScenarioSpec::S2& c, double a, std::span<const double> m, double z) {
    double sum_m = 0.0;
    for (double v : m) sum_m += v;
    return c.y_intercept + c.y_a * a + c.y_m * sum_m + std::sin(m[0] * m[1]) + c.y_z * z;
}

struct S1MediatorSampler final : MediatorSampler {
    ScenarioSpec spec;
    explicit S1MediatorSampler(const ScenarioSpec& s) : spec(s) {}
    std::size_t n_mediators() const override { return 1; }
    Matrix sample(double a, std::span<const double> z, std::size_t n_draws,
                  RngStream& stream) const override {
        Matrix out(n_draws, 1);
        const auto& c = spec.s1;
        for (std::size_t r = 0; r < n_draws; ++r)
            out(r, 0) = c.med_intercept + c.med_a * a + c.med_z * z[0] +
                        c.med_sd * stream.next_normal();
        return out;
    }
    std::string id() const override { return "truth:S1:mediator"; }
};

struct S1OutcomeSampler final : OutcomeSampler {
    ScenarioSpec spec;
    explicit S1OutcomeSampler(const ScenarioSpec& s) : spec(s) {}
    std::vector<double> sample(double a, const Matrix& mediator_rows, std::span<const double> z,
                               RngStream& stream) const override {
        std::vector<double> out(mediator_rows.rows);
        for (std::size_t r = 0; r < mediator_rows.rows; ++r)
            out[r] = s1_outcome_mean(spec.s1, a, mediator_rows(r, 0), z[0]) +
                     spec.s1.y_sd * stream.next_normal();
        return out;
    }
    std::string id() const override { return "truth:S1:outcome"; }
};

struct S2MediatorSampler final : MediatorSampler {
    ScenarioSpec spec;
    Matrix chol;
    explicit S2MediatorSampler(const ScenarioSpec& s) : spec(s), chol(s2_noise_cholesky(s)) {}
    std::size_t n_mediators() const override { return 5; }
    Matrix sample(double a, std::span<const double> z, std::size_t n_draws,
                  RngStream& stream) const override {
        Matrix out(n_draws, 5);
        const auto& c = spec.s2;
        double eps[5];
        for (std::size_t r = 0; r < n_draws; ++r) {
            for (int k = 0; k < 5; ++k) eps[k] = stream.next_normal();
            for (int i = 0; i < 5; ++i) {
                double corr = 0.0;
                for (int j = 0; j <= i; ++j) corr += chol(i, j) * eps[j];
                out(r, i) = c.intercept[i] + c.b_a[i] * a + c.b_z[i] * z[0] + corr;
            }
        }
        return out;
    }
    std::string id() const override { return "truth:S2:mediator"; }
};

struct S2OutcomeSampler final : OutcomeSampler {
    ScenarioSpec spec;
    explicit S2OutcomeSampler(const ScenarioSpec& s) : spec(s) {}
    std::vector<double> sample(double a, const Matrix& mediator_rows, std::span<const double> z,
                               RngStream& stream) const override {
        std::vector<double> out(mediator_rows.rows);
        for (std::size_t r = 0; r < mediator_rows.rows; ++r)
            out[r] = s2_outcome_mean(spec.s2, a, mediator_rows.row(r), z[0]) +
                     spec.s2.y_sd * stream.next_normal();
        return out;
    }
    std::string id() const override { return "truth:S2:outcome"; }
};

} // namespace

Dataset generate_scenario(const ScenarioSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n;
    RngStream root(spec.seed, kScenarioTag);
    RngStream a_stream = rng_split(root, 0);
    RngStream z_stream = rng_split(root, 1);
    RngStream m_stream = rng_split(root, 2);
    RngStream y_stream = rng_split(root, 3);

    Dataset data;
    data.a.resize(n);
    data.y.resize(n);
    data.z = Matrix(n, 1);
    data.m = Matrix(n, spec.n_mediators());
    for (std::size_t i = 0; i < n; ++i) {
        data.a[i] = a_stream.next_double() < 0.5 ? 1.0 : 0.0;
        data.z(i, 0) = z_stream.next_normal();
    }

    auto fm = truth_mediator_sampler(spec);
    auto fy = truth_outcome_sampler(spec);
    for (std::size_t i = 0; i < n; ++i) {
        const Matrix m_i = fm->sample(data.a[i], data.z.row(i), 1, m_stream);
        for (std::size_t c = 0; c < data.m.cols; ++c) data.m(i, c) = m_i(0, c);
        data.y[i] = fy->sample(data.a[i], m_i, data.z.row(i), y_stream)[0];
    }
    data.ensure_names();
    data.validate();
    return data;
}

std::unique_ptr<MediatorSampler> truth_mediator_sampler(const ScenarioSpec& spec) {
    if (spec.id == ScenarioId::S1) return std::make_unique<S1MediatorSampler>(spec);
    return std::make_unique<S2MediatorSampler>(spec);
}

std::unique_ptr<OutcomeSampler> truth_outcome_sampler(const ScenarioSpec& spec) {
    if (spec.id == ScenarioId::S1) return std::make_unique<S1OutcomeSampler>(spec);
    return std::make_unique<S2OutcomeSampler>(spec);
}

} // namespace dcma
