#ifndef DCMA_CONFIG_HPP
#define DCMA_CONFIG_HPP

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "dcma/csv.hpp"
#include "dcma/pipeline.hpp"
#include "dcma/scenarios.hpp"

namespace dcma {

/// Data source: a synthetic scenario or a CSV file with column roles.
struct SourceConfig {
    std::optional<ScenarioSpec> scenario;
    std::string csv_path;
    ColumnRoles roles;

    bool is_scenario() const { return scenario.has_value(); }
};

/// Oracle protocol used when a run needs ground truth (reps > 1, oracle cmd).
struct OracleConfig {
    std::size_t n_oracle = 100000;
    std::size_t b_oracle = 200;
};

/// One run of the tool: source, pipeline protocol, outputs. A single master
/// seed keys every stage; the resolved form written next to the outputs has
/// all defaults materialized.
struct RunConfig {
    SourceConfig source;
    PipelineConfig pipeline;
    std::optional<BootstrapConfig> bootstrap;
    OracleConfig oracle;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    std::size_t reps = 1;
    unsigned threads = 0;
    bool write_regimes = true;
    bool ipse_all = true; // when no explicit list was configured

    void validate() const;
    /// Derives stage seeds from the master seed and fills the IPSE list.
    void finalize(std::size_t n_mediators);

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);
    nlohmann::ordered_json to_json() const;
};

enum class RunProfile { None, Quick, Table1 };
RunProfile profile_from_name(const std::string& name);
/// quick: n=2000, 5 reps; table1: n=5000, 20 reps (scenario sources only).
void apply_profile(RunConfig& cfg, RunProfile profile);

} // namespace dcma

#endif
