#ifndef DCMA_COMMANDS_HPP
#define DCMA_COMMANDS_HPP

#include <string>

#include "dcma/config.hpp"

namespace dcma {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Scenario source: generate data, run the pipeline (or the replication study
/// when reps > 1), write artifacts to cfg.out_dir.
void cmd_simulate(RunConfig cfg);
/// CSV source: train, simulate, estimate effects (+ bootstrap intervals).
void cmd_estimate(RunConfig cfg);
/// Scenario source: ground-truth effects from the known mechanism.
void cmd_oracle(RunConfig cfg);
/// Scenario source: replication study comparing the learned outcome generator
/// against the linear-Gaussian outcome ablation, regime by regime.
void cmd_ablation(RunConfig cfg);

/// Runs a command, mapping errors to exit codes: 0 success, 2 config or data
/// problems, 1 runtime failures. Messages go to stderr.
int run_command(const std::string& command, RunConfig cfg);

} // namespace dcma

#endif
