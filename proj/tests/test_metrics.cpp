#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dcma/metrics.hpp"
#include "dcma/rng.hpp"

using namespace dcma;

namespace {

SampleSet column(std::vector<double> v) {
    const std::size_t n = v.size();
    return SampleSet(n, 1, std::move(v));
}

SampleSet normal_sample(double mu, double sd, std::size_t n, std::uint64_t seed,
                        std::uint64_t stream) {
    RngStream s(seed, stream);
    SampleSet out(n, 1);
    for (std::size_t i = 0; i < n; ++i) out.data[i] = mu + sd * s.next_normal();
    return out;
}

} // namespace

TEST_CASE("energy_score_mc hand-computed examples") {
    // generated {0,2}, y=1: pair term (2+2)/4 = 1, data term (1+1)/2 = 1
    CHECK(energy_score_mc(column({0, 2}), std::vector<double>{1.0}) == doctest::Approx(0.0));
    // generated {0,2}, y=0: 1 - (0+2)/2 = 0
    CHECK(energy_score_mc(column({0, 2}), std::vector<double>{0.0}) == doctest::Approx(0.0));
    // point mass at the observation
    CHECK(energy_score_mc(column({1.5, 1.5, 1.5}), std::vector<double>{1.5}) ==
          doctest::Approx(0.0));
    // asymmetric case with a nonzero value: {0,2} vs y=3 -> 1 - (3+1)/2 = -1
    CHECK(energy_score_mc(column({0, 2}), std::vector<double>{3.0}) == doctest::Approx(-1.0));
}

TEST_CASE("energy_score_mc rejects K < 2 and dimension mismatch") {
    CHECK_THROWS_AS(energy_score_mc(column({1.0}), std::vector<double>{1.0}), ArgumentError);
    CHECK_THROWS_AS(energy_score_mc(SampleSet(2, 2, {1, 2, 3, 4}), std::vector<double>{1.0}),
                    ArgumentError);
}

TEST_CASE("energy_distance hand-computed examples") {
    // x = {0,2}, y = {1}: 2*1 - 1 - 0 = 1 (within-x V term (0+2+2+0)/4 = 1)
    CHECK(energy_distance(column({0, 2}), column({1})) == doctest::Approx(1.0));
    // two point masses at distance 1
    CHECK(energy_distance(column({0}), column({1})) == doctest::Approx(2.0));
    // identical sets
    const SampleSet x = normal_sample(0, 1, 500, 10, 0);
    CHECK(std::abs(energy_distance(x, x)) <= 1e-12);
}

TEST_CASE("energy_distance axioms on random samples") {
    for (std::uint64_t trial = 0; trial < 8; ++trial) {
        const SampleSet x = normal_sample(0.1 * trial, 1.0, 300 + 40 * trial, 100 + trial, 0);
        const SampleSet y = normal_sample(-0.2, 1.3, 250 + 30 * trial, 200 + trial, 1);
        const double dxy = energy_distance(x, y);
        const double dyx = energy_distance(y, x);
        CHECK(dxy == dyx); // exact, by canonical argument ordering
        CHECK(dxy >= -1e-12);
        CHECK(std::abs(energy_distance(x, x)) <= 1e-12);
    }
}

TEST_CASE("energy_distance dimension mismatch") {
    CHECK_THROWS_AS(energy_distance(SampleSet(2, 2, {1, 2, 3, 4}), column({1})), ArgumentError);
}

TEST_CASE("energy_distance subsamples large inputs deterministically") {
    const SampleSet big = normal_sample(0, 1, 12000, 3, 0);
    const double a = energy_distance(big, big);
    CHECK(std::abs(a) <= 1e-12); // same subsample on both sides
    const SampleSet other = normal_sample(0.5, 1, 12000, 4, 1);
    CHECK(energy_distance(big, other) == energy_distance(big, other));
}

TEST_CASE("strict propriety: average score maximized at the true mean") {
    // Q = N(0,1) with 1e4 observations; candidates N(mu, 1).
    RngStream obs_stream(55, 0);
    const std::size_t n_obs = 10000;
    std::vector<double> obs(n_obs);
    for (auto& v : obs) v = obs_stream.next_normal();

    const std::vector<double> mus = {-1.0, -0.5, 0.0, 0.5, 1.0};
    double best_mu = -99, best_score = -1e300;
    for (std::size_t k = 0; k < mus.size(); ++k) {
        const SampleSet pred = normal_sample(mus[k], 1.0, 500, 77, k);
        double total = 0.0;
        for (double y : obs) total += energy_score_mc(pred, std::span<const double>(&y, 1));
        if (total / n_obs > best_score) {
            best_score = total / n_obs;
            best_mu = mus[k];
        }
    }
    CHECK(best_mu == 0.0);
}

TEST_CASE("wasserstein1_1d examples") {
    CHECK(wasserstein1_1d(column({1, 3}), column({2, 4})) == doctest::Approx(1.0));
    const SampleSet x = normal_sample(0, 1, 400, 6, 0);
    CHECK(wasserstein1_1d(x, x) == doctest::Approx(0.0));
    CHECK(wasserstein1_1d(column({0, 0, 0, 0}), column({1})) == doctest::Approx(1.0));
}

TEST_CASE("wasserstein1_1d rejects multivariate input") {
    CHECK_THROWS_AS(wasserstein1_1d(SampleSet(2, 2, {1, 2, 3, 4}), SampleSet(2, 2, {1, 2, 3, 4})),
                    ArgumentError);
}

TEST_CASE("w1 metric axioms") {
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        const SampleSet x = normal_sample(0, 1, 150 + 13 * trial, 300 + trial, 0);
        const SampleSet y = normal_sample(0.4, 1.2, 140 + 11 * trial, 400 + trial, 1);
        const SampleSet z = normal_sample(-0.3, 0.8, 160 + 7 * trial, 500 + trial, 2);
        const double dxy = wasserstein1_1d(x, y);
        const double dyx = wasserstein1_1d(y, x);
        CHECK(dxy == dyx);
        // triangle inequality
        CHECK(dxy <= wasserstein1_1d(x, z) + wasserstein1_1d(z, y) + 1e-9);
        // translation equivariance
        SampleSet xs = x, ys = y;
        for (double& v : xs.data) v += 2.5;
        for (double& v : ys.data) v += 2.5;
        CHECK(std::abs(wasserstein1_1d(xs, ys) - dxy) <= 1e-12);
    }
}

TEST_CASE("empirical_quantile interpolation examples") {
    CHECK(empirical_quantile(std::vector<double>{1, 2, 3, 4, 5}, 0.5) == doctest::Approx(3.0));
    CHECK(empirical_quantile(std::vector<double>{0, 10}, 0.25) == doctest::Approx(2.5));
    CHECK(empirical_quantile(std::vector<double>{4.2, 4.2, 4.2}, 0.9) == doctest::Approx(4.2));
    CHECK_THROWS_AS(empirical_quantile(std::vector<double>{1.0, 2.0}, 1.0), ArgumentError);
    CHECK_THROWS_AS(empirical_quantile(std::vector<double>{1.0, 2.0}, 0.0), ArgumentError);
}

TEST_CASE("quantile monotonicity in tau") {
    const SampleSet x = normal_sample(1.0, 2.0, 313, 8, 0);
    std::vector<double> sorted(x.data);
    std::sort(sorted.begin(), sorted.end());
    double prev = -1e300;
    for (double tau = 0.02; tau < 0.99; tau += 0.02) {
        const double q = quantile_sorted(sorted, tau);
        CHECK(q >= prev);
        prev = q;
    }
}

TEST_CASE("exceedance counts closed threshold") {
    const std::vector<double> x = {1, 2, 3, 4};
    CHECK(exceedance(x, 3.0) == doctest::Approx(0.5)); // >= 3
    CHECK(exceedance(x, 0.0) == doctest::Approx(1.0));
    CHECK(exceedance(x, 5.0) == doctest::Approx(0.0));
}

TEST_CASE("apply_functional_contrast basics") {
    const SampleSet p = column({1, 3});
    const SampleSet q = column({0, 2});
    CHECK(apply_functional_contrast(FunctionalSpec::mean(), p, q).value == doctest::Approx(1.0));
    CHECK(apply_functional_contrast(FunctionalSpec::ed(), p, p).value == doctest::Approx(0.0));
    const auto w = apply_functional_contrast(FunctionalSpec::w1(), p, q);
    CHECK(w.value == doctest::Approx(1.0));
    const auto dte = apply_functional_contrast(FunctionalSpec::dte_point(2.5), p, q);
    CHECK(dte.value == doctest::Approx(0.5 - 1.0)); // F_p(2.5)=0.5, F_q(2.5)=1.0
}

TEST_CASE("qte curve is flat under a location shift") {
    const SampleSet p = normal_sample(0, 1, 4000, 12, 0);
    SampleSet q = p;
    for (double& v : q.data) v -= 2.0;
    const auto spec = FunctionalSpec::qte_curve({0.1, 0.25, 0.5, 0.75, 0.9});
    const auto curve = apply_functional_contrast(spec, p, q);
    REQUIRE(curve.is_curve);
    for (double v : curve.curve) CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
    const auto zero = apply_functional_contrast(spec, p, p);
    for (double v : zero.curve) CHECK(v == 0.0);
}

TEST_CASE("functional validation") {
    CHECK_THROWS_AS(FunctionalSpec::quantile(1.2), ArgumentError);
    CHECK_THROWS_AS(FunctionalSpec::qte_curve({}), ArgumentError);
    CHECK_THROWS_AS(FunctionalSpec::qte_curve({0.5, 0.25}), ArgumentError);
}

TEST_CASE("ES/ED consistency from shared pairwise sums") {
    // The ES pairwise term is the ordered-pair U-statistic while the ED
    // within-term is the V-statistic, so the exact identity carries the
    // flavor correction withinU(X) - withinV(X) = withinU(X)/n.
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
        const std::size_t n = 120 + 17 * trial;
        const SampleSet x = normal_sample(0.2, 1.0, n, 600 + trial, 0);
        const SampleSet y = normal_sample(-0.1, 1.4, n, 700 + trial, 1);
        double mean_score = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            mean_score += energy_score_mc(x, std::span<const double>(&y.data[j], 1));
        mean_score /= static_cast<double>(n);
        const double lhs = 2.0 * (-mean_score) - mean_pairwise_distance_vstat(y);
        const double correction =
            mean_pairwise_distance_ustat(x) - mean_pairwise_distance_vstat(x);
        CHECK(std::abs(lhs + correction - energy_distance(x, y)) < 1e-9);
    }
}
