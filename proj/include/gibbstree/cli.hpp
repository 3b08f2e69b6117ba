#pragma once

#include <string>
#include <vector>

namespace gibbstree {

/// Command-line entry point. Subcommands: kernel-check, solve-ti, contraction,
/// art, bg, zachary, verify, sample, marginal. Exit codes: 0 success, 2 bad
/// configuration, 3 numeric failure.
int cli_run(const std::vector<std::string>& argv);

}  // namespace gibbstree
