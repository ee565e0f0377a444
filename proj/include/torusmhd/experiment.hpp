#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "torusmhd/config.hpp"
#include "torusmhd/diagnostics.hpp"
#include "torusmhd/kernel_verifier.hpp"

namespace torusmhd {

/// Process exit codes of the command-line runner.
enum class ExitCode : int { Ok = 0, Failure = 1, Validation = 2, BlowUp = 3, Io = 4 };

struct ExperimentOutcome {
  ExitCode code = ExitCode::Ok;
  std::string message;
  nlohmann::json summary;  // also written to summary.json
  std::vector<std::filesystem::path> artifacts;
};

/// Runs one experiment and writes its artifacts into cfg.output_dir. Every
/// run leaves a config echo with JSON summary and manifest. Time-dependent
/// runs add a CSV series; nonlinear runs add the final checkpoint.
/// Never throws; failures are mapped onto ExitCode.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

nlohmann::json to_json(const DecayFit& fit);
nlohmann::json to_json(const BoundReport& report);

}  // namespace torusmhd
