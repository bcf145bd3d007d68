#pragma once

#include <string>

#include "ffwnm/config.hpp"

namespace ffwnm {

// Subcommand bodies, shared between the CLI and the integration tests.
// Each writes its reports under cfg.out_dir and returns a process exit
// code: 0 success, 2 characterization failure, 3 convergence failure.

int cmd_timing(const RunConfig& cfg);
int cmd_wnm(const RunConfig& cfg);
int cmd_failprob(const RunConfig& cfg, const std::string& summary_csv_path = "");
int cmd_export_netlists(const RunConfig& cfg);
int cmd_selfcheck(const RunConfig& cfg);

} // namespace ffwnm
