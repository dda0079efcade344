#pragma once

#include <cstdint>
#include <vector>

#include "ac/field.hpp"
#include "ac/potential.hpp"
#include "ac/types.hpp"

namespace ac {

// Closest point of co(A), the convex hull of the minima (segment for
// m = 1, simplex for N = m+1). m in {1,2} shipped.
Vec project_to_hull(const MinimaSet& minima, const Vec& v);

// max over grid points of dist(u(x), co(A)).
double containment_check(const Field& u, const MinimaSet& minima);

// (r, L^n(B_r(center) intersect {|u - a| > lambda})) by cell counting.
std::vector<std::pair<double, double>> density_curve(const Field& u, const Vec& a,
                                                     double lambda, const Vec& center,
                                                     const std::vector<double>& radii);

struct PhaseCurves {
  // one curve per minimum: (R, measure)
  std::vector<std::vector<std::pair<double, double>>> volume;
  std::vector<std::vector<std::pair<double, double>>> perimeter;
};

// volume: cell count of {|u - a_k| <= tol} in B_R; perimeter: count of
// cell faces separating core from non-core inside B_R, times h^{n-1}.
PhaseCurves phase_volume_perimeter(const Field& u, const MinimaSet& minima, double tol,
                                   const Vec& center, const std::vector<double>& radii);

// sup over sampled pairs of |u(x)-u(y)| / (|x-y| ln(1/|x-y|)),
// h <= |x-y| <= 1/2.
double log_modulus(const Field& u, int nPairs = 2000, std::uint64_t seed = 777);

struct FreeBoundaryGradStats {
  bool empty = true;
  double mean = 0.0;
  double maxv = 0.0;
  long samples = 0;
  std::vector<double> histogram;  // 20 bins on [0, maxv]
};

enum class AlphaKind : std::uint8_t { Positive, Zero };

// One-sided |grad u|^2 on non-core cells adjacent to core cells; the
// difference is taken toward the non-core side.
FreeBoundaryGradStats free_boundary_gradient(const Field& u, const MinimaSet& minima,
                                             double tolCore, AlphaKind kind);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;  // of log J vs log r
};

// OLS on (log r, log J), zero-energy entries excluded; needs >= 3 points.
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& profile);

}  // namespace ac
