#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ac/field.hpp"
#include "ac/potential.hpp"
#include "ac/symmetry.hpp"

namespace ac {

enum class StepRule : std::uint8_t { Fixed, Backtracking };

struct MinimizeConfig {
  StepRule stepRule = StepRule::Backtracking;
  double tau = 0.25;            // initial (or fixed) step
  double beta = 0.5;            // backtracking shrink factor
  double c1 = 1e-4;             // Armijo constant
  double tolGrad = 1e-6;        // stationarity tolerance, max |first variation|
  int maxIters = 20000;
  std::vector<double> epsLadder;    // W^eps continuation, decreasing
  std::vector<double> alphaLadder;  // alpha -> 0 continuation, decreasing
  bool equivariant = false;
  bool positivity = false;
  bool clampToHull = false;
  // Laplacian-preconditioned (semi-implicit) steps; plain explicit
  // gradient steps when false.
  bool preconditioned = true;

  void validate() const;
};

struct LadderRung {
  double param = 0.0;  // eps or alpha for the rung
  double finalEnergy = 0.0;
  int iterations = 0;
  std::string stopReason;
};

struct MinimizeResult {
  Field field;
  std::vector<double> energyHistory;  // per accepted iteration, totals
  std::vector<LadderRung> ladderRecord;
  bool converged = false;
  std::string reason;
  EnergyBreakdown finalEnergy;  // unregularized
};

MinimizeResult minimize(const Field& u0, const Potential& p, const MinimizeConfig& cfg,
                        const EquivariantSetup* setup = nullptr);

// Generic-density overload used by the scalar model problems.
MinimizeResult minimize_density(const Field& u0, const EnergyDensity& p,
                                const MinimizeConfig& cfg,
                                const EquivariantSetup* setup = nullptr,
                                const EnergyDensity* reportDensity = nullptr);

struct ContinuationStep {
  double alpha = 0.0;
  MinimizeResult result;
};

struct ContinuationSummary {
  std::vector<std::pair<double, double>> alphaEnergy;  // (alpha, J^alpha)
  double j0OnFinal = 0.0;  // J^0 of the last rung's field
};

std::pair<std::vector<ContinuationStep>, ContinuationSummary> continuation_alpha(
    const Field& u0, const MinimaSet& minima, const MinimizeConfig& cfg,
    const EquivariantSetup* setup = nullptr);

struct RadiusSweepEntry {
  double R = 0.0;
  MinimizeResult result;
  EnergyBreakdown energy;
};

std::vector<RadiusSweepEntry> radius_sweep(const Potential& p,
                                           const EquivariantSetup& setup,
                                           const std::vector<double>& radii,
                                           double h, const MinimizeConfig& cfg);

}  // namespace ac
