#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ac/field.hpp"
#include "ac/potential.hpp"
#include "ac/types.hpp"

namespace ac {

// Quadratic torsion profile on the ball: psi(x) = (R^2 - |x-x0|^2)/(2n),
// the exact solution of Lap psi + 1 = 0 with zero boundary data.
struct TorsionBall {
  double R = 1.0;
  int n = 2;
  Vec x0;

  double psi(const Vec& x) const { return (R * R - (x - x0).squaredNorm()) / (2.0 * n); }
  double psi_max() const { return R * R / (2.0 * n); }
  // s(x) = sqrt(2 (psi_m - psi(x))) = |x - x0| / sqrt(n)
  double s(const Vec& x) const { return (x - x0).norm() / std::sqrt(double(n)); }
  double s0() const { return std::sqrt(2.0 * psi_max()); }
};

TorsionBall torsion_ball(double R, int n, const Vec& x0);

// d(p,c) = sqrt(2(p+1)) / ((1-p) c)
double sperb_d(double p, double c);

struct SupersolutionProfile {
  double p = 0.5;
  double c = 1.0;
  double s0 = 1.0;
  double X0 = 0.0;                // value at s = 0
  double deadCoreOnset = 0.0;     // s_d with X == 0 on [0, s_d]; 0 if none
  bool hasDeadCore = false;
  std::vector<std::pair<double, double>> samples;  // (s, X(s))

  double eval(double s) const;  // monotone interpolation of the table
};

// Solves X'' = c^2 X^p on (0,s0), X'(0)=0, X(s0)=1. Closed form with a
// dead core when s0 >= d(p,c); otherwise shooting on X(0) by bisection.
SupersolutionProfile supersolution_profile(double p, double c, double s0);

struct DeadCoreRadius {
  bool predicted = false;  // false: outside the two-case formula
  double R0 = 0.0;
  double d = 0.0;     // d(p, c-hat)
  double cHat = 0.0;  // c / delta^{(1-p)/2}
};

DeadCoreRadius predicted_deadcore_radius(double p, double c, double delta, double R, int n);

struct DeadCoreEntry {
  Vec minimum;
  long coreCellCount = 0;
  double coreInradius = 0.0;
  std::optional<double> predictedR0;
  bool containsPredictedCore = false;
};

struct DeadCoreReport {
  double tolCore = 1e-6;
  std::vector<DeadCoreEntry> perMinimum;
};

// Optional (p, c, delta) data for comparing against the predicted radius
// (c^2 = 2 alpha C*; delta measured near the core boundary).
struct DeadCorePrediction {
  double p = 0.5;
  double c = 1.0;
  double delta = 1.0;
  double R = 1.0;  // ball radius the prediction applies to
};

DeadCoreReport detect_deadcore(const Field& u, const MinimaSet& minima, double tolCore,
                               const std::optional<DeadCorePrediction>& pred = std::nullopt);

// Max positive part of Lap_h ubar - c^2 ubar^p over grid-interior ball
// points, ubar(x) = X(s(x)).
double verify_supersolution(double p, double c, double R, int n, double h);

// C-hat(alpha, n) explicit constant.
double hat_c_constant(double alpha, int n, double C0, double C1, double cStar, double rho0);

// Scalar model density W(v) = (2 c^2 / (2 + alpha)) |v|^{(2+alpha)/2},
// whose Euler-Lagrange equation is Lap v = c^2 |v|^{alpha/2} sgn(v).
struct DeadCoreModelDensity final : EnergyDensity {
  double c = 1.0;
  double alpha = 1.0;  // = 2p
  int dim() const override { return 1; }
  double value(Eigen::Ref<const Vec> u) const override;
  void grad(Eigen::Ref<const Vec> u, Eigen::Ref<Vec> g) const override;
};

}  // namespace ac
