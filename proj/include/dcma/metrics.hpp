#ifndef DCMA_METRICS_HPP
#define DCMA_METRICS_HPP

#include <span>
#include <string>
#include <vector>

#include "dcma/matrix.hpp"

namespace dcma {

/// Empirical sample set; each row is one draw, columns are the dimension.
using SampleSet = Matrix;

/// Identifies the summary / discrepancy applied to interventional
/// distributions. Contrast kinds take T(P) - T(Q); ed and w1 are
/// discrepancies applied to the pair directly.
struct FunctionalSpec {
    enum class Kind { Mean, Quantile, Exceedance, Ed, W1, DtePoint, QteCurve };

    Kind kind = Kind::Mean;
    double tau = 0.5;              // quantile
    double threshold = 0.0;        // exceedance / dte_point
    std::vector<double> tau_grid;  // qte_curve

    void validate() const;
    std::string name() const;         // e.g. "quantile(0.25)", "ed"
    std::string kind_name() const;    // e.g. "quantile"
    bool is_curve() const { return kind == Kind::QteCurve; }
    /// ed / w1 are symmetric in the pair; contrasts flip sign under swap.
    bool is_discrepancy() const { return kind == Kind::Ed || kind == Kind::W1; }

    static FunctionalSpec mean();
    static FunctionalSpec quantile(double tau);
    static FunctionalSpec exceedance(double c);
    static FunctionalSpec ed();
    static FunctionalSpec w1();
    static FunctionalSpec dte_point(double c);
    static FunctionalSpec qte_curve(std::vector<double> grid);
    static FunctionalSpec::Kind kind_from_name(const std::string& name);
};

/// Scalar value or a per-tau curve, depending on the functional.
struct ContrastValue {
    bool is_curve = false;
    double value = 0.0;
    std::vector<double> curve;
};

/// Monte Carlo energy score of the predictive sample against one observation:
/// (1/(2K(K-1))) sum_{k != k'} |U_k - U_k'| - (1/K) sum_k |U_k - y|.
double energy_score_mc(const SampleSet& generated, std::span<const double> observation);

/// V-statistic energy distance 2 E|X-Y| - E|X-X'| - E|Y-Y'| with within-set
/// means over all ordered pairs including i == j. Inputs larger than
/// kEdSubsampleCap rows are deterministically subsampled.
double energy_distance(const SampleSet& x, const SampleSet& y);

inline constexpr std::size_t kEdSubsampleCap = 5000;

/// Mean pairwise distance over ordered pairs k != k' (the energy-score
/// pairwise term, shared by the ES/ED consistency identity).
double mean_pairwise_distance_ustat(const SampleSet& x);
/// Mean pairwise distance over all ordered pairs including k == k'.
double mean_pairwise_distance_vstat(const SampleSet& x);

/// Exact 1-D Wasserstein-1 via the merged step grid of both empirical
/// quantile functions (reduces to sorted mean absolute difference when the
/// sizes match).
double wasserstein1_1d(std::span<const double> x, std::span<const double> y);
double wasserstein1_1d(const SampleSet& x, const SampleSet& y);

/// Linear-interpolation quantile, position h = (n-1) tau + 1 on sorted values.
double empirical_quantile(std::span<const double> x, double tau);
/// Same, assuming `sorted` is already ascending.
double quantile_sorted(std::span<const double> sorted, double tau);

/// Fraction of points >= c.
double exceedance(std::span<const double> x, double c);
/// Empirical CDF at c (fraction <= c).
double ecdf_at(std::span<const double> x, double c);

double mean_of(std::span<const double> x);

/// Psi(P, Q) per the functional: contrasts return T(p) - T(q); ed / w1 return
/// the discrepancy; qte_curve returns per-tau quantile contrasts.
ContrastValue apply_functional_contrast(const FunctionalSpec& spec, const SampleSet& p,
                                        const SampleSet& q);
ContrastValue apply_functional_contrast(const FunctionalSpec& spec, std::span<const double> p,
                                        std::span<const double> q);

/// Deterministic without-replacement row subsample (fixed internal seed).
SampleSet subsample_rows(const SampleSet& x, std::size_t max_rows);
/// Same selection rule for a flat 1-D sample.
SampleSet subsample_span(std::span<const double> x, std::size_t max_rows);

} // namespace dcma

#endif
