#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ac/experiments.hpp"

using namespace ac;
namespace fs = std::filesystem;

TEST_CASE("experiment registry and config validation") {
  const auto names = experiment_names();
  CHECK(names.size() == 6);
  for (const auto& n : names) CHECK_NOTHROW(normalize_config(default_config(n)));

  CHECK_THROWS_AS(normalize_config(Json{{"experiment", "nope"}}), std::invalid_argument);
  CHECK_THROWS_AS(normalize_config(Json::object()), std::invalid_argument);
}

TEST_CASE("alpha restriction is reported with the valid range") {
  Json cfg = default_config("connection1d");
  cfg["params"]["alpha"] = 2.5;
  const RunOutcome out = run_experiment(cfg, std::nullopt);
  CHECK(out.status == 2);
  const std::string msg = out.manifest.at("error").get<std::string>();
  CHECK(msg.find("[0, 2)") != std::string::npos);
}

TEST_CASE("config normalization is idempotent and round-trips") {
  for (const auto& n : experiment_names()) {
    const Json once = normalize_config(default_config(n));
    const Json twice = normalize_config(once);
    CHECK(once == twice);
  }
}

TEST_CASE("bad minimize sub-config is rejected") {
  Json cfg = default_config("connection1d");
  cfg["minimize"]["epsLadder"] = {0.01, 0.05};  // not decreasing
  CHECK_THROWS_AS(normalize_config(cfg), std::invalid_argument);
  Json cfg2 = default_config("gamma_limit");
  cfg2["minimize"]["alphaLadder"] = {1.0, 0.5, 0.0};
  CHECK_THROWS_AS(normalize_config(cfg2), std::invalid_argument);
}

TEST_CASE("emit_outputs: empty bundle writes the manifest only") {
  const std::string dir = "/tmp/ac_test_empty_bundle";
  fs::remove_all(dir);
  OutputBundle bundle;
  bundle.manifest = {{"hello", 1}};
  emit_outputs(bundle, dir);
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    ++files;
    CHECK(e.path().filename() == "manifest.json");
  }
  CHECK(files == 1);
  fs::remove_all(dir);
}

TEST_CASE("supersolution experiment: artifacts, determinism, failure status") {
  Json cfg = default_config("supersolution_check");
  cfg["params"]["R"] = 4.0;
  cfg["params"]["h"] = 0.02;  // quick variant

  const std::string dir = "/tmp/ac_test_ss_run";
  fs::remove_all(dir);
  const RunOutcome a = run_experiment(cfg, dir);
  CHECK(a.status == 0);
  CHECK(fs::exists(fs::path(dir) / "manifest.json"));
  CHECK(fs::exists(fs::path(dir) / "curves" / "supersolution_profile.csv"));
  CHECK(fs::exists(fs::path(dir) / "reports" / "supersolution.json"));

  // determinism: identical manifests modulo the timing block
  const RunOutcome b = run_experiment(cfg, std::nullopt);
  Json ma = a.manifest, mb = b.manifest;
  ma.erase("timing");
  mb.erase("timing");
  CHECK(ma == mb);

  // the echoed config re-validates and reproduces the run
  const RunOutcome c = run_experiment(a.manifest.at("config"), std::nullopt);
  Json mc = c.manifest;
  mc.erase("timing");
  CHECK(mc == ma);

  // unattainable tolerance: checks fail, status 1, no exception
  Json hard = cfg;
  hard["params"]["tol"] = 1e-18;
  const RunOutcome f = run_experiment(hard, std::nullopt);
  CHECK(f.status == 1);
  CHECK_FALSE(f.manifest.at("passed").get<bool>());
  fs::remove_all(dir);
}

TEST_CASE("connection1d quick run emits the full layout") {
  Json cfg = default_config("connection1d");
  cfg["params"]["h"] = 0.01;
  cfg["params"]["L"] = 4.0;
  cfg["minimize"]["epsLadder"] = {0.1, 0.02};
  cfg["minimize"]["tolGrad"] = 1e-4;
  // coarse h: the oracle gap grows, so only require the pipeline to run
  const std::string dir = "/tmp/ac_test_c1_run";
  fs::remove_all(dir);
  const RunOutcome out = run_experiment(cfg, dir);
  CHECK(out.status <= 1);
  CHECK(fs::exists(fs::path(dir) / "manifest.json"));
  CHECK(fs::exists(fs::path(dir) / "fields" / "connection1d.csv"));
  CHECK(fs::exists(fs::path(dir) / "curves" / "oracle_profile.csv"));
  CHECK(fs::exists(fs::path(dir) / "reports" / "connection1d.json"));
  CHECK(out.manifest.contains("checks"));
  CHECK(out.manifest.at("results").contains("linf_vs_oracle"));
  fs::remove_all(dir);
}
