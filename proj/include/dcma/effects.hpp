#ifndef DCMA_EFFECTS_HPP
#define DCMA_EFFECTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dcma/metrics.hpp"
#include "dcma/simulate.hpp"

namespace dcma {

/// Which mediation effect a value refers to.
struct EffectKind {
    enum class Type { ITE, IDE, IPSE };
    Type type = Type::ITE;
    int s = 0; // 1-based mediator index for IPSE

    std::string name() const;
    static EffectKind ite() { return {Type::ITE, 0}; }
    static EffectKind ide() { return {Type::IDE, 0}; }
    static EffectKind ipse(int s) { return {Type::IPSE, s}; }
    /// (treated-member, control-member) regime pair for this effect.
    std::pair<RegimeLabel, RegimeLabel> regime_pair() const;
    bool operator==(const EffectKind& o) const { return type == o.type && s == o.s; }
};

/// A functional value for one effect, with an optional percentile-bootstrap
/// interval. Percentile intervals may exclude the point estimate; only
/// lower <= upper is guaranteed.
struct EffectEstimate {
    EffectKind kind;
    FunctionalSpec functional;
    bool is_curve = false;
    double point = 0.0;
    std::vector<double> curve;

    bool has_interval = false;
    double lower = 0.0, upper = 0.0;
    std::vector<double> lower_curve, upper_curve;

    struct Meta {
        std::size_t resamples = 0;
        std::size_t refits = 1;
        std::uint64_t seed = 0;
        double level = 0.95;
    } meta;
};

struct BootstrapConfig {
    std::size_t resamples = 100;
    std::size_t refits_per_resample = 1;
    std::uint64_t seed = 0;
    double level = 0.95;

    void validate() const;
};

/// Psi applied to the pooled draws of the effect's regime pair, treated
/// member first. Throws ArgumentError naming any missing regime.
EffectEstimate compute_effect(const RegimeSamples& samples, const EffectKind& kind,
                              const FunctionalSpec& functional);

/// Per-tau quantile contrast curve between the effect's regime pair.
EffectEstimate quantile_effect_curve(const RegimeSamples& samples, const EffectKind& kind,
                                     const std::vector<double>& tau_grid);

} // namespace dcma

#endif
