#include "dcma/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dcma/metrics.hpp"
#include "dcma/parallel.hpp"

namespace dcma {

std::string RegimeLabel::name() const {
    switch (kind) {
        case Kind::Y1M1: return "Y(1,M1)";
        case Kind::Y0M0: return "Y(0,M0)";
        case Kind::Y1M0: return "Y(1,M0)";
        case Kind::IpseTreated: return "IPSE" + std::to_string(s) + "_treated";
        case Kind::IpseControl: return "IPSE" + std::to_string(s) + "_control";
    }
    return "?";
}

RegimeLabel RegimeLabel::parse(const std::string& name) {
    if (name == "Y(1,M1)") return {Kind::Y1M1, 0};
    if (name == "Y(0,M0)") return {Kind::Y0M0, 0};
    if (name == "Y(1,M0)") return {Kind::Y1M0, 0};
    if (name.rfind("IPSE", 0) == 0) {
        const auto underscore = name.find('_');
        if (underscore != std::string::npos) {
            const int s = std::stoi(name.substr(4, underscore - 4));
            const std::string tail = name.substr(underscore + 1);
            if (tail == "treated") return {Kind::IpseTreated, s};
            if (tail == "control") return {Kind::IpseControl, s};
        }
    }
    throw ArgumentError("unknown regime label '" + name + "'");
}

void SimConfig::validate(std::size_t n_mediators) const {
    if (draws_per_obs < 2)
        throw ConfigError("sim config: B must be >= 2 (permutation hybrids need B >= 2)");
    for (int s : ipse_indices)
        if (s < 1 || static_cast<std::size_t>(s) > n_mediators)
            throw ConfigError("sim config: IPSE index " + std::to_string(s) +
                              " outside 1.." + std::to_string(n_mediators));
}

std::vector<RegimeLabel> SimConfig::regimes() const {
    std::vector<RegimeLabel> out;
    if (include_core) {
        out.push_back({RegimeLabel::Kind::Y1M1, 0});
        out.push_back({RegimeLabel::Kind::Y0M0, 0});
        out.push_back({RegimeLabel::Kind::Y1M0, 0});
    }
    for (int s : ipse_indices) {
        out.push_back({RegimeLabel::Kind::IpseTreated, s});
        out.push_back({RegimeLabel::Kind::IpseControl, s});
    }
    return out;
}

std::vector<int> SimConfig::all_ipse(std::size_t n_mediators) {
    std::vector<int> out(n_mediators);
    for (std::size_t s = 0; s < n_mediators; ++s) out[s] = static_cast<int>(s + 1);
    return out;
}

std::pair<Matrix, Matrix> draw_counterfactual_mediators(const MediatorSampler& fm,
                                                        std::span<const double> z, std::size_t b,
                                                        RngStream stream_arm0,
                                                        RngStream stream_arm1) {
    Matrix m0 = fm.sample(0.0, z, b, stream_arm0);
    Matrix m1 = fm.sample(1.0, z, b, stream_arm1);
    return {std::move(m0), std::move(m1)};
}

std::pair<Matrix, Matrix> build_hybrid_mediators(const Matrix& m0, const Matrix& m1, int s,
                                                 const std::vector<std::uint32_t>& perm1,
                                                 const std::vector<std::uint32_t>& perm2) {
    if (!m0.same_shape(m1))
        throw ShapeError("build_hybrid_mediators: arm matrices differ in shape");
    const std::size_t b = m0.rows;
    const std::size_t n_med = m0.cols;
    if (s < 1 || static_cast<std::size_t>(s) > n_med)
        throw ArgumentError("build_hybrid_mediators: pathway index " + std::to_string(s) +
                            " outside 1.." + std::to_string(n_med));
    if (perm1.size() != b || perm2.size() != b)
        throw ArgumentError("build_hybrid_mediators: permutation length != B");
    const std::size_t si = static_cast<std::size_t>(s - 1);
    Matrix treated(b, n_med), control(b, n_med);
    for (std::size_t r = 0; r < b; ++r) {
        const std::size_t r1 = perm1[r], r2 = perm2[r];
        for (std::size_t c = 0; c < si; ++c) {
            treated(r, c) = m0(r1, c);
            control(r, c) = m0(r1, c);
        }
        treated(r, si) = m1(r, si);
        control(r, si) = m0(r, si);
        for (std::size_t c = si + 1; c < n_med; ++c) {
            treated(r, c) = m1(r2, c);
            control(r, c) = m1(r2, c);
        }
    }
    return {std::move(treated), std::move(control)};
}

namespace {

constexpr std::uint64_t kSimStreamTag = 0x53494D55ULL;

// Per-observation substream ids.
enum StreamPurpose : std::uint64_t {
    kMed0 = 0,
    kMed1 = 1,
    kNoiseY11 = 2,
    kNoiseY00 = 3,
    kNoiseY10 = 4,
    kPerm1 = 5,
    kPerm2 = 6,
    kIpseBase = 7, // treated = base + 2(s-1), control = base + 2(s-1) + 1
};

void store_row(Matrix& draws, std::size_t i, const std::vector<double>& values,
               const RegimeLabel& regime) {
    for (std::size_t b = 0; b < values.size(); ++b) {
        if (!std::isfinite(values[b]))
            throw SimError("forward_simulate: non-finite outcome at observation " +
                           std::to_string(i) + ", draw " + std::to_string(b) + ", regime " +
                           regime.name());
        draws(i, b) = values[b];
    }
}

} // namespace

RegimeSamples forward_simulate(const MediatorSampler& fm, const OutcomeSampler& fy,
                               const Dataset& data, const SimConfig& cfg) {
    cfg.validate(fm.n_mediators());
    const std::size_t n = data.n();
    const std::size_t b = cfg.draws_per_obs;
    if (n < 1) throw ArgumentError("forward_simulate: empty dataset");
    if (data.d_z() < 1) throw ArgumentError("forward_simulate: dataset has no covariates");

    RegimeSamples out;
    for (const RegimeLabel& regime : cfg.regimes()) {
        InterventionalSamples samples;
        samples.regime = regime;
        samples.draws = Matrix(n, b);
        samples.master_seed = cfg.master_seed;
        samples.fm_id = fm.id();
        samples.fy_id = fy.id();
        out.emplace(regime, std::move(samples));
    }
    if (out.empty()) return out;

    InterventionalSamples* y11 = nullptr;
    InterventionalSamples* y00 = nullptr;
    InterventionalSamples* y10 = nullptr;
    if (cfg.include_core) {
        y11 = &out.at({RegimeLabel::Kind::Y1M1, 0});
        y00 = &out.at({RegimeLabel::Kind::Y0M0, 0});
        y10 = &out.at({RegimeLabel::Kind::Y1M0, 0});
    }

    const RngStream root(cfg.master_seed, kSimStreamTag);
    parallel_for(
        n,
        [&](std::size_t i) {
            const RngStream obs_stream = rng_split(root, i);
            const std::span<const double> z = data.z.row(i);

            auto [m0, m1] = draw_counterfactual_mediators(
                fm, z, b, rng_split(obs_stream, kMed0), rng_split(obs_stream, kMed1));

            if (cfg.include_core) {
                RngStream s11 = rng_split(obs_stream, kNoiseY11);
                store_row(y11->draws, i, fy.sample(1.0, m1, z, s11), y11->regime);
                RngStream s00 = rng_split(obs_stream, kNoiseY00);
                store_row(y00->draws, i, fy.sample(0.0, m0, z, s00), y00->regime);
                RngStream s10 = rng_split(obs_stream, kNoiseY10);
                store_row(y10->draws, i, fy.sample(1.0, m0, z, s10), y10->regime);
            }

            if (!cfg.ipse_indices.empty()) {
                RngStream p1 = rng_split(obs_stream, kPerm1);
                RngStream p2 = rng_split(obs_stream, kPerm2);
                const std::vector<std::uint32_t> perm1 = random_permutation(b, p1);
                const std::vector<std::uint32_t> perm2 = random_permutation(b, p2);
                for (int s : cfg.ipse_indices) {
                    auto [treated, control] = build_hybrid_mediators(m0, m1, s, perm1, perm2);
                    auto& ts = out.at({RegimeLabel::Kind::IpseTreated, s});
                    auto& cs = out.at({RegimeLabel::Kind::IpseControl, s});
                    RngStream st = rng_split(obs_stream, kIpseBase + 2 * (s - 1));
                    store_row(ts.draws, i, fy.sample(1.0, treated, z, st), ts.regime);
                    RngStream sc = rng_split(obs_stream, kIpseBase + 2 * (s - 1) + 1);
                    store_row(cs.draws, i, fy.sample(1.0, control, z, sc), cs.regime);
                }
            }
        },
        cfg.threads);
    return out;
}

RegimeSamples forward_simulate(const GeneratorModel& fm, const GeneratorModel& fy,
                               const Dataset& data, const SimConfig& cfg) {
    const ModelMediatorSampler med(fm);
    const ModelOutcomeSampler outc(fy);
    if (fy.n_mediators != fm.n_mediators)
        throw ShapeError("forward_simulate: mediator counts disagree between models");
    return forward_simulate(med, outc, data, cfg);
}

void dump_regimes_csv(const RegimeSamples& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("dump_regimes_csv: cannot open " + path);
    out << "regime,i,b,y\n";
    char buf[64];
    for (const auto& [regime, s] : samples) {
        const std::string name = regime.name();
        for (std::size_t i = 0; i < s.n(); ++i)
            for (std::size_t b = 0; b < s.b(); ++b) {
                std::snprintf(buf, sizeof(buf), "%.17g", s.draws(i, b));
                out << name << ',' << i << ',' << b << ',' << buf << '\n';
            }
    }
}

ErrorDecomposition error_decomposition_diag(const MediatorSampler& fm, const OutcomeSampler& fy,
                                            const ScenarioSpec& scenario, double z, double a,
                                            double a_prime, std::size_t n_mc,
                                            std::uint64_t seed) {
    if (scenario.n_mediators() != 1 || fm.n_mediators() != 1)
        throw ArgumentError(
            "error_decomposition_diag: only single-mediator scenarios are supported");
    if (n_mc < 2) throw ArgumentError("error_decomposition_diag: n_mc must be >= 2");

    const auto true_fm = truth_mediator_sampler(scenario);
    const auto true_fy = truth_outcome_sampler(scenario);
    const std::array<double, 1> zv{z};
    const std::span<const double> zs(zv.data(), 1);

    RngStream root(seed, 0x45444543ULL);
    auto draw = [&](const MediatorSampler& med, const OutcomeSampler& outc,
                    std::uint64_t which) {
        RngStream sm = rng_split(root, 2 * which);
        RngStream sy = rng_split(root, 2 * which + 1);
        const Matrix m = med.sample(a_prime, zs, n_mc, sm);
        const std::vector<double> y = outc.sample(a, m, zs, sy);
        return SampleSet(n_mc, 1, std::vector<double>(y.begin(), y.end()));
    };

    const SampleSet r_hat = draw(fm, fy, 0);        // estimated mediator + estimated outcome
    const SampleSet r_true = draw(*true_fm, *true_fy, 1); // true mechanism
    const SampleSet r_med = draw(*true_fm, fy, 2);  // true mediator law, estimated outcome

    ErrorDecomposition d;
    d.b_total = energy_distance(r_hat, r_true);
    d.b_mediator = energy_distance(r_hat, r_med);
    d.b_outcome = energy_distance(r_med, r_true);
    return d;
}

} // namespace dcma
