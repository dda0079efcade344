#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "ac/experiments.hpp"

namespace {

ac::Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return ac::Json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acvar: vector Allen-Cahn laboratory for sub-quadratic potentials"};
  app.require_subcommand(1);

  std::string configPath;
  std::optional<std::string> outDir;
  int threads = 0;
  std::optional<long> seed;

  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", configPath, "config JSON file")->required();
  run->add_option("--out", outDir, "output directory for artifacts");
  run->add_option("--threads", threads, "Eigen thread count (0 = default)");
  run->add_option("--seed", seed, "override config seed");

  std::string valPath;
  auto* val = app.add_subcommand("validate", "validate a config without running");
  val->add_option("config", valPath, "config JSON file")->required();

  auto* list = app.add_subcommand("list-experiments", "list known experiment names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& n : ac::experiment_names()) std::cout << n << "\n";
      return 0;
    }
    if (val->parsed()) {
      const ac::Json cfg = load_json(valPath);
      const ac::Json merged = ac::normalize_config(cfg);
      std::cout << merged.dump(2) << "\n";
      return 0;
    }
    // run
    if (threads > 0) Eigen::setNbThreads(threads);
    ac::Json cfg = load_json(configPath);
    if (seed) cfg["seed"] = *seed;
    const ac::RunOutcome outcome = ac::run_experiment(cfg, outDir);
    if (outcome.status == 2 || outcome.status == 3) {
      std::cerr << "error: " << outcome.manifest.value("error", "unknown") << "\n";
      return outcome.status;
    }
    std::cout << outcome.manifest.dump(2) << "\n";
    return outcome.status;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
