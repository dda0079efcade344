#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ac/field.hpp"
#include "ac/minimize.hpp"

namespace ac {

using Json = nlohmann::json;

// Named pipelines; defaults for each are the desk-scale verification runs.
std::vector<std::string> experiment_names();

// Fills in defaults for the named experiment and validates the result.
// Throws std::invalid_argument with a message on bad configs.
Json normalize_config(const Json& cfg);

Json default_config(const std::string& experiment);

struct OutputBundle {
  Json manifest;
  std::map<std::string, Field> fields;
  std::map<std::string, std::pair<std::string, std::vector<std::pair<double, double>>>>
      curves;  // name -> (header, data)
  std::map<std::string, Json> reports;
};

// Fixed layout: manifest.json, fields/*.csv, curves/*.csv, reports/*.json.
void emit_outputs(const OutputBundle& bundle, const std::string& dir);

struct RunOutcome {
  int status = 0;  // 0 pass, 1 checks failed, 2 validation, 3 divergence
  Json manifest;
};

// Runs the named pipeline; when outDir is set, artifacts are written there.
RunOutcome run_experiment(const Json& cfg, const std::optional<std::string>& outDir);

}  // namespace ac
