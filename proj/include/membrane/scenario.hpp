#pragma once

#include "membrane/snapshot_io.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace membrane {

// Problems in configs or command lines; mapped to exit code 2 by the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string name;
  std::map<std::string, std::string> kv;
};

// "key = value" lines grouped by [section] headers; '#' starts a comment.
// Sections become scenarios; keys before the first section form an implicit
// scenario named "main" if they include a kind.
std::vector<Scenario> parse_config_text(const std::string& text);
std::vector<Scenario> parse_config_file(const std::string& path);

// 0 pass, 1 tolerance failure, 3 numerical abort; every run leaves
// <outdir>/<name>/report.json plus kind-specific files next to it.
struct ScenarioOutcome {
  std::string name;
  int code = 0;
  std::string report_path;
};

ScenarioOutcome run_scenario(const Scenario& sc, const std::string& outdir);

// Schema check only: throws ConfigError on unknown kinds, unknown or
// malformed keys, and parameter combinations that can never run. Writes
// nothing, so a config can be rejected before any artifact exists.
void validate_scenario(const Scenario& sc);

// Runs all scenarios of a config (jobs > 1 uses a thread pool; outputs are
// per-scenario so results do not depend on scheduling) and returns the worst
// exit code.
int run_config(const std::string& path, const std::string& outdir, int jobs = 1);

}  // namespace membrane
