#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dcma/density.hpp"
#include "dcma/metrics.hpp"
#include "dcma/study.hpp"

using namespace dcma;

namespace {

ScenarioSpec scenario_stub() {
    ScenarioSpec spec;
    spec.id = ScenarioId::S1;
    spec.n = 100;
    return spec;
}

} // namespace

TEST_CASE("generate_scenario is a pure function of the spec") {
    ScenarioSpec spec;
    spec.id = ScenarioId::S2;
    spec.n = 200;
    spec.seed = 5;
    const Dataset a = generate_scenario(spec);
    const Dataset b = generate_scenario(spec);
    CHECK(a.a == b.a);
    CHECK(a.z.data == b.z.data);
    CHECK(a.m.data == b.m.data);
    CHECK(a.y == b.y);
    spec.seed = 6;
    const Dataset c = generate_scenario(spec);
    CHECK(a.y != c.y);
}

TEST_CASE("S1 mediator mean near z = 0 under treatment") {
    ScenarioSpec spec;
    spec.id = ScenarioId::S1;
    spec.n = 100000;
    spec.seed = 7;
    const Dataset d = generate_scenario(spec);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < d.n(); ++i) {
        if (d.a[i] == 1.0 && std::abs(d.z(i, 0)) < 0.1) {
            sum += d.m(i, 0);
            ++count;
        }
    }
    REQUIRE(count > 1000);
    CHECK(sum / static_cast<double>(count) == doctest::Approx(1.5).epsilon(0.02));
}

TEST_CASE("S1 treated outcomes are bimodal with far-apart modes") {
    ScenarioSpec spec;
    spec.id = ScenarioId::S1;
    spec.n = 100000;
    spec.seed = 8;
    const Dataset d = generate_scenario(spec);
    std::vector<double> treated;
    std::vector<double> control;
    for (std::size_t i = 0; i < d.n(); ++i)
        (d.a[i] == 1.0 ? treated : control).push_back(d.y[i]);
    const ModeReport tm = count_modes(treated, 0.35);
    CHECK(tm.count() == 2);
    CHECK(tm.max_separation() > 3.0);
    CHECK(count_modes(control, 0.35).count() == 1);
}

TEST_CASE("S2 mediator noise correlation matches the covariance design") {
    ScenarioSpec spec;
    spec.id = ScenarioId::S2;
    spec.n = 100000;
    spec.seed = 9;
    const Dataset d = generate_scenario(spec);
    // Recover eps = M - (intercept + bA a + bZ z) and correlate components 1, 2.
    double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
    for (std::size_t i = 0; i < d.n(); ++i) {
        const double e1 = d.m(i, 0) - (0.5 + 1.0 * d.a[i] + 0.3 * d.z(i, 0));
        const double e2 = d.m(i, 1) - (0.5 + 0.8 * d.a[i] + 0.3 * d.z(i, 0));
        s1 += e1;
        s2 += e2;
        s11 += e1 * e1;
        s22 += e2 * e2;
        s12 += e1 * e2;
    }
    const double n = static_cast<double>(d.n());
    const double cov = s12 / n - (s1 / n) * (s2 / n);
    const double v1 = s11 / n - (s1 / n) * (s1 / n);
    const double v2 = s22 / n - (s2 / n) * (s2 / n);
    CHECK(cov / std::sqrt(v1 * v2) == doctest::Approx(0.6).epsilon(0.04));
}

TEST_CASE("S2 Cholesky factor reconstructs the covariance") {
    ScenarioSpec spec;
    spec.id = ScenarioId::S2;
    const Matrix l = s2_noise_cholesky(spec);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            double recon = 0.0;
            for (int k = 0; k < 5; ++k) recon += l(i, k) * l(j, k);
            CHECK(std::abs(recon - std::pow(0.6, std::abs(i - j))) < 1e-10);
        }
    }
}

TEST_CASE("oracle_truth on a reduced grid reproduces the analytic S1 means") {
    ScenarioSpec spec;
    spec.id = ScenarioId::S1;
    spec.seed = 10;
    const OracleTruth truth =
        oracle_truth(spec, 20000, 100, {FunctionalSpec::mean(), FunctionalSpec::ed()});
    CHECK(truth.at(EffectKind::ite(), FunctionalSpec::mean()).value ==
          doctest::Approx(0.5).epsilon(0.06));
    CHECK(std::abs(truth.at(EffectKind::ide(), FunctionalSpec::mean()).value) < 0.04);
    CHECK(truth.at(EffectKind::ipse(1), FunctionalSpec::mean()).value ==
          doctest::Approx(0.5).epsilon(0.06));
    // The S1 headline contrast: IDE is null at the mean, far from null in ED.
    CHECK(truth.at(EffectKind::ide(), FunctionalSpec::ed()).value > 0.2);
    CHECK(truth.meta.n_oracle == 20000);
}

TEST_CASE("oracle_truth is stable across seeds") {
    ScenarioSpec a = scenario_stub();
    a.seed = 14;
    ScenarioSpec b = scenario_stub();
    b.seed = 15;
    const auto fa = oracle_truth(a, 20000, 100, {FunctionalSpec::mean(), FunctionalSpec::ed()});
    const auto fb = oracle_truth(b, 20000, 100, {FunctionalSpec::mean(), FunctionalSpec::ed()});
    for (const auto& kind : {EffectKind::ite(), EffectKind::ide(), EffectKind::ipse(1)}) {
        CHECK(std::abs(fa.at(kind, FunctionalSpec::mean()).value -
                       fb.at(kind, FunctionalSpec::mean()).value) < 0.02);
        CHECK(std::abs(fa.at(kind, FunctionalSpec::ed()).value -
                       fb.at(kind, FunctionalSpec::ed()).value) < 0.03);
    }
}

TEST_CASE("oracle_truth is reproducible given its meta") {
    ScenarioSpec spec;
    spec.id = ScenarioId::S1;
    spec.seed = 11;
    const auto a = oracle_truth(spec, 4000, 50, {FunctionalSpec::mean()});
    const auto b = oracle_truth(spec, 4000, 50, {FunctionalSpec::mean()});
    CHECK(a.at(EffectKind::ite(), FunctionalSpec::mean()).value ==
          b.at(EffectKind::ite(), FunctionalSpec::mean()).value);
}

TEST_CASE("null scenario has no effects") {
    ScenarioSpec spec;
    spec.id = ScenarioId::S2;
    spec.seed = 12;
    const ScenarioSpec null_spec = spec.null_variant();
    const OracleTruth truth = oracle_truth(null_spec, 20000, 60, {FunctionalSpec::mean()});
    for (const auto& kind :
         {EffectKind::ite(), EffectKind::ide(), EffectKind::ipse(1), EffectKind::ipse(3)}) {
        CHECK(std::abs(truth.at(kind, FunctionalSpec::mean()).value) < 0.02);
    }

    ScenarioSpec null_s1 = spec;
    null_s1.id = ScenarioId::S1;
    const OracleTruth t1 = oracle_truth(null_s1.null_variant(), 20000, 60, {FunctionalSpec::mean()});
    CHECK(std::abs(t1.at(EffectKind::ite(), FunctionalSpec::mean()).value) < 0.02);
}

TEST_CASE("replication study rejects zero replications and curve functionals") {
    ScenarioSpec spec;
    spec.id = ScenarioId::S1;
    PipelineConfig cfg;
    OracleTruth truth;
    CHECK_THROWS_AS(run_replication_study(spec, StudyMethod::DcmaEs, 0, cfg, truth),
                    ArgumentError);
    PipelineConfig curve_cfg;
    curve_cfg.functionals = {FunctionalSpec::qte_curve({0.5})};
    CHECK_THROWS_AS(run_replication_study(spec, StudyMethod::DcmaEs, 2, curve_cfg, truth),
                    ArgumentError);
}

TEST_CASE("replication study reports bias and rmse against the oracle") {
    ScenarioSpec spec;
    spec.id = ScenarioId::S1;
    spec.n = 1200;
    spec.seed = 13;
    const OracleTruth truth = oracle_truth(spec, 20000, 80, {FunctionalSpec::mean()});
    PipelineConfig cfg;
    cfg.train.master_seed = 14;
    cfg.train.hidden = {24, 24};
    cfg.train.max_epochs = 120;
    cfg.train.patience = 12;
    cfg.sim.draws_per_obs = 60;
    cfg.sim.master_seed = 15;
    cfg.sim.threads = 2;
    cfg.functionals = {FunctionalSpec::mean()};
    const StudyResult res = run_replication_study(spec, StudyMethod::DcmaEs, 2, cfg, truth);
    REQUIRE(res.rows.size() == 3); // ITE, IDE, IPSE1
    for (const auto& row : res.rows) {
        CHECK(std::isfinite(row.bias));
        CHECK(row.rmse >= std::abs(row.bias) - 1e-12);
        CHECK(row.reps == 2);
        // Desk-scale sanity: a short run on S1 stays within a loose band.
        CHECK(std::abs(row.bias) < 0.25);
    }
}
