// SPDX-License-Identifier: Apache-2.0
//
// Terminal front end: interactive REPL and batch mode.
//
// Exit codes: 0 success, 1 invalid input or unmet expectation,
// 2 backend error, 3 clarification needed (JSON on stdout).
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "t2n/orchestrator.hpp"

namespace t2n {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitBackend = 2, kExitClarify = 3 };

struct CliConfig {
  OrchestratorConfig orchestrator;
  ProvisionBackend backend = ProvisionBackend::Sim;
  std::optional<std::string> scenario_file;
  std::optional<std::string> output_path;
  std::optional<std::string> expect_file;
  std::vector<std::string> replies;  // batch: answers fed to clarification rounds, in order
};

/// Maps an error event code to its exit code class.
int exit_code_for(std::string_view code);

int run_repl(const CliConfig& config, std::istream& in, std::ostream& out);

/// Expectation file lines (blank lines and '#' comments ignored):
///   expect ping <host> <address> success|failure
///   expect show config <host> contains <text>
///   <any query>                      run and print, no expectation
int run_batch(const CliConfig& config, std::ostream& out, std::ostream& err);

}  // namespace t2n
