#pragma once

#include <iosfwd>

#include "config.hpp"

namespace lot::cli {

enum ExitCode : int { kOk = 0, kSuiteFailure = 1, kConfigError = 2 };

struct RunOptions {
  bool exact = false;  // distmat: also build the exact W2 matrix
};

// Every command writes its artifacts under config.output_dir and a short
// human-readable log to `log`. They return an exit code for suite outcomes
// and throw on configuration and I/O problems.
int cmd_embed(const ExperimentConfig& config, std::ostream& log);
int cmd_distmat(const ExperimentConfig& config, const RunOptions& options, std::ostream& log);
int cmd_gen(const ExperimentConfig& config, std::ostream& log);
int cmd_mnist(const ExperimentConfig& config, std::ostream& log);
int cmd_verify(const ExperimentConfig& config, std::ostream& log);

// Measures listed in the config followed by every family member, with ids.
std::vector<NamedMeasure> collect_measures(const ExperimentConfig& config);

// Parses argv, dispatches and maps exceptions to exit codes.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace lot::cli
