#include "dcma/effects.hpp"

namespace dcma {

std::string EffectKind::name() const {
    switch (type) {
        case Type::ITE: return "ITE";
        case Type::IDE: return "IDE";
        case Type::IPSE: return "IPSE" + std::to_string(s);
    }
    return "?";
}

std::pair<RegimeLabel, RegimeLabel> EffectKind::regime_pair() const {
    switch (type) {
        case Type::ITE:
            return {{RegimeLabel::Kind::Y1M1, 0}, {RegimeLabel::Kind::Y0M0, 0}};
        case Type::IDE:
            return {{RegimeLabel::Kind::Y1M0, 0}, {RegimeLabel::Kind::Y0M0, 0}};
        case Type::IPSE:
            return {{RegimeLabel::Kind::IpseTreated, s}, {RegimeLabel::Kind::IpseControl, s}};
    }
    throw ArgumentError("EffectKind: unhandled type");
}

void BootstrapConfig::validate() const {
    if (resamples < 2) throw ConfigError("bootstrap config: need at least 2 resamples");
    if (refits_per_resample < 1) throw ConfigError("bootstrap config: refits must be >= 1");
    if (!(level > 0.0 && level < 1.0))
        throw ConfigError("bootstrap config: interval level must lie in (0,1)");
}

namespace {

const InterventionalSamples& regime_or_throw(const RegimeSamples& samples,
                                             const RegimeLabel& label) {
    const auto it = samples.find(label);
    if (it == samples.end())
        throw ArgumentError("compute_effect: regime " + label.name() + " is missing");
    return it->second;
}

} // namespace

EffectEstimate compute_effect(const RegimeSamples& samples, const EffectKind& kind,
                              const FunctionalSpec& functional) {
    const auto [treated, control] = kind.regime_pair();
    const auto& p = regime_or_throw(samples, treated);
    const auto& q = regime_or_throw(samples, control);
    const ContrastValue v = apply_functional_contrast(functional, p.pooled(), q.pooled());
    EffectEstimate est;
    est.kind = kind;
    est.functional = functional;
    est.is_curve = v.is_curve;
    est.point = v.value;
    est.curve = v.curve;
    return est;
}

EffectEstimate quantile_effect_curve(const RegimeSamples& samples, const EffectKind& kind,
                                     const std::vector<double>& tau_grid) {
    return compute_effect(samples, kind, FunctionalSpec::qte_curve(tau_grid));
}

} // namespace dcma
