#pragma once

#include <string>
#include <vector>

#include "mlab/config.hpp"

namespace mlab::experiments {

struct RunResult {
    int exit_code = 0;  // 0 pass, 1 tolerance breach, 2 config error
    std::string status; // "pass", "fail", "recorded"
    std::string summary; // one-line JSON for CI consumption
    std::vector<std::string> artifacts;
};

// Registers refinement hooks; call once before run().
void init();

std::vector<std::string> command_ids();
// One-line statement of the identity or property the command exercises.
std::string command_help(const std::string& id);

// Executes one experiment: writes CSV artifacts plus summary.json under
// out_root/<command>[-<tag>]/, and meta.json as the timestamp sidecar.
// CSV bodies and summary.json are byte-identical for identical config.
RunResult run(const ExperimentConfig& cfg, const std::string& out_root);

// Resolution order for the output root: explicit argument, MLAB_OUT_ROOT,
// then ./mlab-out.
std::string resolve_out_root(const std::string& explicit_root);

} // namespace mlab::experiments
