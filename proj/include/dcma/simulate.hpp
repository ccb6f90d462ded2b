#ifndef DCMA_SIMULATE_HPP
#define DCMA_SIMULATE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dcma/dataset.hpp"
#include "dcma/samplers.hpp"
#include "dcma/scenarios.hpp"

namespace dcma {

/// Interventional configuration whose outcome distribution gets simulated.
struct RegimeLabel {
    enum class Kind { Y1M1, Y0M0, Y1M0, IpseTreated, IpseControl };
    Kind kind = Kind::Y1M1;
    int s = 0; // 1-based mediator index for IPSE kinds

    std::string name() const;
    static RegimeLabel parse(const std::string& name);
    bool operator<(const RegimeLabel& o) const {
        return kind != o.kind ? kind < o.kind : s < o.s;
    }
    bool operator==(const RegimeLabel& o) const { return kind == o.kind && s == o.s; }
};

/// n x B matrix of counterfactual outcome draws for one regime; row i holds
/// the B Monte Carlo draws for observation i.
struct InterventionalSamples {
    RegimeLabel regime;
    Matrix draws;
    std::uint64_t master_seed = 0;
    std::string fm_id, fy_id;

    std::size_t n() const { return draws.rows; }
    std::size_t b() const { return draws.cols; }
    /// All n*B draws as one flat sample (the pooled interventional sample).
    std::span<const double> pooled() const { return draws.flat(); }
};

using RegimeSamples = std::map<RegimeLabel, InterventionalSamples>;

struct SimConfig {
    std::size_t draws_per_obs = 200; // B
    std::uint64_t master_seed = 0;
    std::vector<int> ipse_indices;   // 1-based; empty = none
    bool include_core = true;        // Y(1,M1), Y(0,M0), Y(1,M0)
    unsigned threads = 0;            // 0 = hardware

    void validate(std::size_t n_mediators) const;
    /// Core regimes plus treated/control pairs for every requested s.
    std::vector<RegimeLabel> regimes() const;
    static std::vector<int> all_ipse(std::size_t n_mediators);
};

/// Counterfactual mediator draws under both arms: row b of the first matrix
/// is f_M(0, z, eps0_b), of the second f_M(1, z, eps1_b), with independent
/// noise streams per arm.
std::pair<Matrix, Matrix> draw_counterfactual_mediators(const MediatorSampler& fm,
                                                        std::span<const double> z, std::size_t b,
                                                        RngStream stream_arm0,
                                                        RngStream stream_arm1);

/// Hybrid mediator rows for pathway s: row b is
/// (M0[perm1(b), <s], M•[b, s], M1[perm2(b), >s]) with the s block from M1
/// (treated) or M0 (control). Both share the permutations and flank blocks.
std::pair<Matrix, Matrix> build_hybrid_mediators(const Matrix& m0, const Matrix& m1, int s,
                                                 const std::vector<std::uint32_t>& perm1,
                                                 const std::vector<std::uint32_t>& perm2);

/// Full forward simulation: per observation i and draw b, counterfactual
/// mediators, hybrids, and outcome draws per regime, each regime with its own
/// noise substream. Deterministic in cfg.master_seed for any thread count.
RegimeSamples forward_simulate(const MediatorSampler& fm, const OutcomeSampler& fy,
                               const Dataset& data, const SimConfig& cfg);
RegimeSamples forward_simulate(const GeneratorModel& fm, const GeneratorModel& fy,
                               const Dataset& data, const SimConfig& cfg);

/// CSV dump (regime,i,b,y) for external plotting.
void dump_regimes_csv(const RegimeSamples& samples, const std::string& path);

/// Sampled estimates of the interventional-distribution error decomposition
/// at one covariate value (single-mediator scenarios only):
///   b_total = ED(Rhat, R), b_mediator = ED(Rhat, Rmed), b_outcome = ED(Rmed, R),
/// where Rhat uses (fm, fy), R the true mechanism, and Rmed the true mediator
/// law pushed through fy.
struct ErrorDecomposition {
    double b_total = 0.0;
    double b_mediator = 0.0; // B1
    double b_outcome = 0.0;  // B2
};
ErrorDecomposition error_decomposition_diag(const MediatorSampler& fm, const OutcomeSampler& fy,
                                            const ScenarioSpec& scenario, double z, double a,
                                            double a_prime, std::size_t n_mc,
                                            std::uint64_t seed = 0);

} // namespace dcma

#endif
