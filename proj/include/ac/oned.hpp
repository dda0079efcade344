#pragma once

#include <vector>

#include "ac/field.hpp"
#include "ac/potential.hpp"

namespace ac {

// The 1D minimizing connection between two scalar wells: equipartition
// profile for alpha in (0,2), the linear profile for alpha = 0.
struct Connection1D {
  double alpha = 1.0;
  double aMinus = -1.0, aPlus = 1.0;
  std::vector<std::pair<double, double>> profile;  // (x, u), x = 0 at midpoint value
  double width = 0.0;     // transition length
  double sigma = 0.0;     // total 1D energy, = int sqrt(2W) du
  double slopeAtFB = 0.0; // one-sided slope at the free boundary

  double eval(double x) const;  // piecewise-linear in the table, clamped
};

// alpha in [0,2); W(u) = |u - a-|^alpha |u - a+|^alpha for alpha > 0.
Connection1D exact_connection(double alpha, double aMinus, double aPlus, double h);

// int du / sqrt(2W(u)) over (a-, a+); finite for alpha in (0,2).
double transition_width(double alpha, double aMinus, double aPlus);

// int sqrt(2 W(u)) du over (a-, a+).
double connection_sigma(double alpha, double aMinus, double aPlus);

// sup over transition samples of |(1/2)(u')^2 - W(u)|, u' by central
// differences on the supplied 1D data.
double equipartition_residual(const std::vector<std::pair<double, double>>& profile,
                              const EnergyDensity& p);
double equipartition_residual(const Field& u, const EnergyDensity& p);

}  // namespace ac
