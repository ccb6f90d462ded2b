#include "dcma/report.hpp"

#include <fstream>

#include "dcma/csv.hpp"

namespace dcma {

using json = nlohmann::ordered_json;

json functional_to_json(const FunctionalSpec& f) {
    json j;
    j["kind"] = f.kind_name();
    switch (f.kind) {
        case FunctionalSpec::Kind::Quantile: j["tau"] = f.tau; break;
        case FunctionalSpec::Kind::Exceedance:
        case FunctionalSpec::Kind::DtePoint: j["threshold"] = f.threshold; break;
        case FunctionalSpec::Kind::QteCurve: j["tau_grid"] = f.tau_grid; break;
        default: break;
    }
    return j;
}

FunctionalSpec functional_from_json(const nlohmann::json& j) {
    const auto kind = FunctionalSpec::kind_from_name(j.at("kind").get<std::string>());
    switch (kind) {
        case FunctionalSpec::Kind::Mean: return FunctionalSpec::mean();
        case FunctionalSpec::Kind::Ed: return FunctionalSpec::ed();
        case FunctionalSpec::Kind::W1: return FunctionalSpec::w1();
        case FunctionalSpec::Kind::Quantile: {
            if (!j.contains("tau")) throw ConfigError("functional quantile: missing field 'tau'");
            return FunctionalSpec::quantile(j.at("tau").get<double>());
        }
        case FunctionalSpec::Kind::Exceedance: {
            if (!j.contains("threshold"))
                throw ConfigError("functional exceedance: missing field 'threshold'");
            return FunctionalSpec::exceedance(j.at("threshold").get<double>());
        }
        case FunctionalSpec::Kind::DtePoint: {
            if (!j.contains("threshold"))
                throw ConfigError("functional dte_point: missing field 'threshold'");
            return FunctionalSpec::dte_point(j.at("threshold").get<double>());
        }
        case FunctionalSpec::Kind::QteCurve: {
            if (!j.contains("tau_grid"))
                throw ConfigError("functional qte_curve: missing field 'tau_grid'");
            return FunctionalSpec::qte_curve(j.at("tau_grid").get<std::vector<double>>());
        }
    }
    throw ConfigError("functional: unhandled kind");
}

json effect_to_json(const EffectEstimate& est) {
    json j;
    j["effect"] = est.kind.name();
    j["functional"] = est.functional.kind_name();
    j["params"] = functional_to_json(est.functional);
    if (est.is_curve) {
        j["point"] = nullptr;
        j["curve"] = est.curve;
    } else {
        j["point"] = est.point;
    }
    if (est.has_interval) {
        if (est.is_curve) {
            j["lower_curve"] = est.lower_curve;
            j["upper_curve"] = est.upper_curve;
        } else {
            j["lower"] = est.lower;
            j["upper"] = est.upper;
        }
        j["meta"] = {{"resamples", est.meta.resamples},
                     {"refits", est.meta.refits},
                     {"seed", est.meta.seed},
                     {"level", est.meta.level}};
    } else {
        j["lower"] = nullptr;
        j["upper"] = nullptr;
    }
    return j;
}

json effects_to_json(const std::vector<EffectEstimate>& effects, const json& run_meta) {
    json j;
    j["meta"] = run_meta;
    json arr = json::array();
    for (const auto& e : effects) arr.push_back(effect_to_json(e));
    j["effects"] = std::move(arr);
    return j;
}

void write_effects_json(const std::vector<EffectEstimate>& effects, const json& run_meta,
                        const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("write_effects_json: cannot open " + path);
    out << effects_to_json(effects, run_meta).dump(2) << "\n";
}

void write_effects_csv(const std::vector<EffectEstimate>& effects, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("write_effects_csv: cannot open " + path);
    out << "effect,functional,param,point,lower,upper\n";
    auto interval = [](const EffectEstimate& e, double lo, double hi) {
        return e.has_interval ? format_double(lo) + "," + format_double(hi) : ",";
    };
    for (const auto& e : effects) {
        if (e.is_curve) {
            for (std::size_t k = 0; k < e.functional.tau_grid.size(); ++k) {
                out << e.kind.name() << ',' << e.functional.kind_name() << ','
                    << format_double(e.functional.tau_grid[k]) << ',' << format_double(e.curve[k])
                    << ','
                    << interval(e, e.has_interval ? e.lower_curve[k] : 0.0,
                                e.has_interval ? e.upper_curve[k] : 0.0)
                    << '\n';
            }
            continue;
        }
        std::string param;
        if (e.functional.kind == FunctionalSpec::Kind::Quantile)
            param = format_double(e.functional.tau);
        else if (e.functional.kind == FunctionalSpec::Kind::Exceedance ||
                 e.functional.kind == FunctionalSpec::Kind::DtePoint)
            param = format_double(e.functional.threshold);
        out << e.kind.name() << ',' << e.functional.kind_name() << ',' << param << ','
            << format_double(e.point) << ',' << interval(e, e.lower, e.upper) << '\n';
    }
}

json oracle_to_json(const OracleTruth& truth) {
    json j;
    j["meta"] = {{"scenario", truth.meta.scenario},
                 {"n_oracle", truth.meta.n_oracle},
                 {"b_oracle", truth.meta.b_oracle},
                 {"seed", truth.meta.seed}};
    json vals;
    for (const auto& [effect, by_functional] : truth.values) {
        json fj;
        for (const auto& [fname, v] : by_functional) {
            if (v.is_curve)
                fj[fname] = v.curve;
            else
                fj[fname] = v.value;
        }
        vals[effect] = std::move(fj);
    }
    j["truth"] = std::move(vals);
    return j;
}

void write_oracle_json(const OracleTruth& truth, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("write_oracle_json: cannot open " + path);
    out << oracle_to_json(truth).dump(2) << "\n";
}

void write_study_csv(const std::vector<StudyResult>& studies, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("write_study_csv: cannot open " + path);
    out << "method,metric,effect,truth,mean_estimate,bias,rmse,reps\n";
    for (const auto& study : studies) {
        for (const auto& row : study.rows)
            out << row.method << ',' << row.functional << ',' << row.effect << ','
                << format_double(row.truth) << ',' << format_double(row.mean_estimate) << ','
                << format_double(row.bias) << ',' << format_double(row.rmse) << ',' << row.reps
                << '\n';
        for (const auto& [label, ed] : study.regime_ed_mean)
            out << (study.rows.empty() ? "" : study.rows.front().method) << ",regime_ed,"
                << label.name() << ",," << format_double(ed) << ",,,\n";
    }
}

json study_to_json(const StudyResult& study) {
    json rows = json::array();
    for (const auto& row : study.rows)
        rows.push_back({{"method", row.method},
                        {"effect", row.effect},
                        {"functional", row.functional},
                        {"truth", row.truth},
                        {"mean_estimate", row.mean_estimate},
                        {"bias", row.bias},
                        {"rmse", row.rmse},
                        {"reps", row.reps}});
    json regime = json::object();
    for (const auto& [label, ed] : study.regime_ed_mean) regime[label.name()] = ed;
    return json{{"rows", std::move(rows)},
                {"regime_ed_mean", std::move(regime)},
                {"failed_reps", study.failed_reps}};
}

} // namespace dcma
