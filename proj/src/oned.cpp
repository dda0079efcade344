#include "ac/oned.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ac/quadrature.hpp"

namespace ac {

namespace {

double well_product(double alpha, double am, double ap, double u) {
  return std::pow(std::abs(u - am), alpha) * std::pow(std::abs(u - ap), alpha);
}

}  // namespace

double Connection1D::eval(double x) const {
  if (profile.empty()) return 0.0;
  if (x <= profile.front().first) return profile.front().second;
  if (x >= profile.back().first) return profile.back().second;
  const auto it = std::lower_bound(profile.begin(), profile.end(), x,
                                   [](const auto& a, double v) { return a.first < v; });
  const auto [x1, u1] = *it;
  const auto [x0, u0] = *(it - 1);
  const double t = (x - x0) / (x1 - x0);
  return (1.0 - t) * u0 + t * u1;
}

double transition_width(double alpha, double aMinus, double aPlus) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("transition_width: alpha in (0,2); the integral diverges at 2");
  if (!(aPlus > aMinus)) throw std::invalid_argument("transition_width: need a- < a+");
  return integrate_tanh_sinh(
      [&](double u) { return 1.0 / std::sqrt(2.0 * well_product(alpha, aMinus, aPlus, u)); },
      aMinus, aPlus, 1e-13);
}

double connection_sigma(double alpha, double aMinus, double aPlus) {
  if (!(aPlus > aMinus)) throw std::invalid_argument("connection_sigma: need a- < a+");
  if (alpha == 0.0) return std::sqrt(2.0) * (aPlus - aMinus);
  return integrate_tanh_sinh(
      [&](double u) { return std::sqrt(2.0 * well_product(alpha, aMinus, aPlus, u)); },
      aMinus, aPlus, 1e-13);
}

Connection1D exact_connection(double alpha, double aMinus, double aPlus, double h) {
  if (!(alpha >= 0.0 && alpha < 2.0))
    throw std::invalid_argument("exact_connection: alpha in [0,2) (width infinite at 2)");
  if (!(aPlus > aMinus)) throw std::invalid_argument("exact_connection: need a- < a+");
  if (!(h > 0.0)) throw std::invalid_argument("exact_connection: h > 0");

  Connection1D c;
  c.alpha = alpha;
  c.aMinus = aMinus;
  c.aPlus = aPlus;

  const double da = aPlus - aMinus;
  const double pad = 0.5;

  if (alpha == 0.0) {
    // Linear profile from exact minimization of L -> (da)^2/(2L) + L.
    c.width = da / std::sqrt(2.0);
    c.sigma = std::sqrt(2.0) * da;
    c.slopeAtFB = std::sqrt(2.0);
    const double halfW = 0.5 * c.width;
    for (double x = -halfW - pad; x <= halfW + pad + 1e-12; x += h) {
      double u;
      if (x <= -halfW)
        u = aMinus;
      else if (x >= halfW)
        u = aPlus;
      else
        u = 0.5 * (aMinus + aPlus) + std::sqrt(2.0) * x;
      c.profile.emplace_back(x, u);
    }
    return c;
  }

  c.width = transition_width(alpha, aMinus, aPlus);
  c.sigma = connection_sigma(alpha, aMinus, aPlus);
  c.slopeAtFB = 0.0;  // u' = sqrt(2W) vanishes at the wells

  // x(u) by cumulative quadrature on a fine u-grid, then inverted. The
  // grid is sine-clustered toward the wells, where x'(u) blows up and a
  // uniform grid would lose accuracy to inverse interpolation.
  const int nU = 8001;
  std::vector<double> ugrid(nU), xof(nU);
  const double mid = 0.5 * (aMinus + aPlus);
  for (int j = 0; j < nU; ++j) {
    const double tau = -1.0 + 2.0 * j / (nU - 1);
    ugrid[j] = mid + 0.5 * da * std::sin(0.5 * M_PI * tau);
  }
  const int jm = (nU - 1) / 2;
  xof[jm] = 0.0;
  auto integrand = [&](double u) {
    return 1.0 / std::sqrt(2.0 * well_product(alpha, aMinus, aPlus, u));
  };
  for (int j = jm + 1; j < nU; ++j)
    xof[j] = xof[j - 1] + integrate_tanh_sinh(integrand, ugrid[j - 1], ugrid[j], 1e-12, 9);
  for (int j = jm - 1; j >= 0; --j)
    xof[j] = xof[j + 1] - integrate_tanh_sinh(integrand, ugrid[j], ugrid[j + 1], 1e-12, 9);
  (void)mid;

  const double halfW = 0.5 * c.width;
  for (double x = -halfW - pad; x <= halfW + pad + 1e-12; x += h) {
    double u;
    if (x <= xof.front())
      u = aMinus;
    else if (x >= xof.back())
      u = aPlus;
    else {
      const auto it = std::lower_bound(xof.begin(), xof.end(), x);
      const size_t j = it - xof.begin();
      // Hermite-cubic inversion of x(u) on the cell; dx/du = 1/sqrt(2W) is
      // known exactly, and linear inversion would leave an O(du^2) kink in
      // the slope that spoils the equipartition identity.
      const double u0 = ugrid[j - 1], u1 = ugrid[j];
      const double du = u1 - u0;
      const double x0 = xof[j - 1], x1 = xof[j];
      const double d0 = integrand(u0) * du, d1 = integrand(u1) * du;
      auto hermite = [&](double t, double* deriv) {
        const double t2 = t * t, t3 = t2 * t;
        if (deriv)
          *deriv = (6.0 * t2 - 6.0 * t) * x0 + (3.0 * t2 - 4.0 * t + 1.0) * d0 +
                   (-6.0 * t2 + 6.0 * t) * x1 + (3.0 * t2 - 2.0 * t) * d1;
        return (2.0 * t3 - 3.0 * t2 + 1.0) * x0 + (t3 - 2.0 * t2 + t) * d0 +
               (-2.0 * t3 + 3.0 * t2) * x1 + (t3 - t2) * d1;
      };
      double t = (x - x0) / (x1 - x0);
      if (std::isfinite(d0) && std::isfinite(d1)) {
        for (int it2 = 0; it2 < 4; ++it2) {
          double dxdt;
          const double r = hermite(t, &dxdt) - x;
          if (dxdt <= 0.0) break;
          t = std::clamp(t - r / dxdt, 0.0, 1.0);
        }
      }
      u = u0 + t * du;
    }
    c.profile.emplace_back(x, u);
  }
  return c;
}

double equipartition_residual(const std::vector<std::pair<double, double>>& profile,
                              const EnergyDensity& p) {
  if (profile.size() < 3) throw std::invalid_argument("equipartition_residual: need >= 3 samples");
  double worst = 0.0;
  Vec u(1);
  for (size_t i = 1; i + 1 < profile.size(); ++i) {
    const double dx = profile[i + 1].first - profile[i - 1].first;
    const double du = (profile[i + 1].second - profile[i - 1].second) / dx;
    u[0] = profile[i].second;
    worst = std::max(worst, std::abs(0.5 * du * du - p.value(u)));
  }
  return worst;
}

double equipartition_residual(const Field& u, const EnergyDensity& p) {
  if (u.grid.n != 1 || u.m != 1)
    throw std::invalid_argument("equipartition_residual: 1D scalar data required");
  std::vector<std::pair<double, double>> prof;
  prof.reserve(u.grid.numNodes);
  for (int i = 0; i < u.grid.numNodes; ++i)
    prof.emplace_back(u.grid.node_pos(i)[0], u.values(0, i));
  return equipartition_residual(prof, p);
}

}  // namespace ac
