// Acceptance gate: one line per criterion, nonzero exit iff any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "ac/deadcore.hpp"
#include "ac/experiments.hpp"

using namespace ac;

namespace {

int failures = 0;

void report(int crit, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", crit, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

struct Timed {
  RunOutcome out;
  double seconds = 0.0;
};

Timed timed_run(const Json& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Timed t;
  t.out = run_experiment(cfg, std::nullopt);
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

double check_value(const Json& manifest, const std::string& name) {
  return manifest.at("checks").at(name).at("value").get<double>();
}

bool check_pass(const Json& manifest, const std::string& name) {
  return manifest.at("checks").at(name).at("pass").get<bool>();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

}  // namespace

int main() {
  // 1. 1D connection, alpha = 1: L-inf vs clipped sin(sqrt(2) x) oracle
  //    <= 1e-2, free-boundary mean |u'|^2 <= 0.05, wall time <= 60 s.
  {
    const Timed t = timed_run(default_config("connection1d"));
    const bool ok = t.out.status == 0 && t.seconds <= 60.0;
    report(1, ok,
           fmt("1D alpha=1 connection: Linf=%.2e fbMean=%.3f wall=%.1fs (<=1e-2, <=0.05, <=60s)",
               t.out.status == 0 || t.out.status == 1 ? check_value(t.out.manifest, "linf_vs_oracle") : -1.0,
               t.out.status <= 1 ? check_value(t.out.manifest, "free_boundary_grad2_mean") : -1.0,
               t.seconds));
  }

  // 2. Dead core radius: scalar radial problem p=1/2, c=1, delta=1, n=2,
  //    R=10, h=0.02; core contains {dist >= R0 + 5h}, values <= 1e-6.
  {
    const Timed t = timed_run(default_config("deadcore_radial"));
    const bool ok = t.out.status == 0;
    const double worst =
        t.out.status <= 1 ? check_value(t.out.manifest, "max_value_on_predicted_core") : -1.0;
    report(2, ok,
           fmt("dead core radius: R0=2sqrt(6), max |v| on predicted core = %.2e (<=1e-6)", worst));
  }

  // 3. Supersolution: max positive part of Lap u - c^2 u^p <= 1e-3 at
  //    h=0.01; halving h improves it by >= 3x.
  {
    const Timed t = timed_run(default_config("supersolution_check"));
    const bool ok = t.out.status == 0;
    report(3, ok,
           fmt("supersolution: violation=%.2e (<=1e-3), refinement ratio=%.2f (>=3)",
               t.out.status <= 1 ? check_value(t.out.manifest, "max_violation") : -1.0,
               t.out.status <= 1 ? check_value(t.out.manifest, "refinement_ratio") : -1.0));
  }

  // 4. alpha -> 0 ladder {1.0, 0.5, 0.25, 0.1}: slope^2 in [1.90, 2.10],
  //    width within 5% of sqrt(2), energy within 5% of 2 sqrt(2); <= 5 min.
  {
    const Timed t = timed_run(default_config("gamma_limit"));
    const bool ok = t.out.status == 0 && t.seconds <= 300.0;
    report(4, ok,
           fmt("alpha->0 ladder: slope^2=%.3f width=%.4f energy=%.4f (targets 2, 1.4142, 2.8284)",
               t.out.status <= 1 ? check_value(t.out.manifest, "interface_slope2") : -1.0,
               t.out.status <= 1 ? check_value(t.out.manifest, "transition_width") : -1.0,
               t.out.status <= 1 ? check_value(t.out.manifest, "final_energy") : -1.0) +
               fmt(" wall=%.0fs (<=300s)", t.seconds));
  }

  // 5 and part of 8: 2D dihedral(3) triple-well on B_8, h = 0.05.
  Json tjManifest;
  {
    const Timed t = timed_run(default_config("triple_junction_2d"));
    tjManifest = t.out.manifest;
    const bool ok = t.out.status <= 1 && check_pass(tjManifest, "containment_hull_distance");
    report(5, ok,
           fmt("containment: max hull distance = %.2e (<=1e-3)",
               t.out.status <= 1 ? check_value(tjManifest, "containment_hull_distance") : -1.0));
  }

  // 6 and 7: radius sweep R in {4,...,12} on the same triple-well.
  {
    const Timed t = timed_run(default_config("scaling_sweep"));
    const bool okSlope = t.out.status <= 1 && check_pass(t.out.manifest, "energy_scaling_slope");
    report(6, okSlope,
           fmt("energy scaling: log-log slope = %.3f (in [0.85, 1.15])",
               t.out.status <= 1 ? check_value(t.out.manifest, "energy_scaling_slope") : -1.0));
    const bool okPhases = t.out.status <= 1 &&
                          check_pass(t.out.manifest, "phases_with_volume_growth") &&
                          check_pass(t.out.manifest, "phases_with_perimeter_growth");
    report(7, okPhases,
           fmt("volume/perimeter growth: %.0f phases with vol exponent >= 1.85, "
               "%.0f with perimeter exponent >= 0.85 (need >= 2 each)",
               t.out.status <= 1 ? check_value(t.out.manifest, "phases_with_volume_growth") : -1.0,
               t.out.status <= 1 ? check_value(t.out.manifest, "phases_with_perimeter_growth")
                                 : -1.0));
  }

  // 8. Equivariance residual <= 10 h^2 on the dihedral run; positivity
  //    projection is an exact fixed point on a coordinate-group run.
  {
    Json cfg = default_config("triple_junction_2d");
    cfg["params"]["group"] = {{"kind", "coordinate"}, {"n", 2}};
    cfg["params"]["R"] = 6.0;
    const Timed t = timed_run(cfg);
    const double h = 0.05;
    const bool eqOk = !tjManifest.empty() && check_pass(tjManifest, "equivariance_residual");
    const bool posOk = t.out.status <= 1 && check_pass(t.out.manifest, "positivity_fixed_point");
    report(8, eqOk && posOk,
           fmt("equivariance residual = %.2e (<= 10 h^2 = %.2e); coordinate-group positivity "
               "fixed-point gap = %.1e (exact)",
               tjManifest.empty() ? -1.0 : check_value(tjManifest, "equivariance_residual"),
               10.0 * h * h,
               t.out.status <= 1 ? check_value(t.out.manifest, "positivity_fixed_point") : -1.0));
  }

  // 9. hat C(alpha, n): finite on {0.05, 0.1, 1.0, 1.9, 1.95} with unit
  //    constants, >= the alpha=1 value at both ends, = 10.449 at alpha=1.
  {
    const double c1 = hat_c_constant(1.0, 2, 1.0, 1.0, 1.0, 1.0);
    bool ok = std::abs(c1 - 10.449) <= 1e-3;
    for (double a : {0.05, 0.1, 1.9, 1.95})
      ok = ok && std::isfinite(hat_c_constant(a, 2, 1.0, 1.0, 1.0, 1.0));
    // both limits blow up: the extreme samples dominate the alpha=1 value
    ok = ok && hat_c_constant(0.05, 2, 1.0, 1.0, 1.0, 1.0) >= c1;
    ok = ok && hat_c_constant(1.95, 2, 1.0, 1.0, 1.0, 1.0) >= c1;
    report(9, ok, fmt("hat C(1, 2) = %.4f (10.449 +- 1e-3); endpoint samples finite, >= at 0.05 and 1.95", c1));
  }

  // 10. The module invariant suites run as the unit-test binaries in this
  //     same ctest invocation (test_potential ... test_harness).
  std::printf("[----] criterion 10: module invariant suites run as the unit test binaries "
              "(test_potential .. test_harness) in this ctest run\n");

  if (failures > 0) std::printf("%d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
