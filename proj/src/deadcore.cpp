#include "ac/deadcore.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace ac {

TorsionBall torsion_ball(double R, int n, const Vec& x0) {
  if (!(R > 0.0)) throw std::invalid_argument("torsion_ball: R > 0 required");
  TorsionBall t;
  t.R = R;
  t.n = n;
  t.x0 = x0;
  return t;
}

double sperb_d(double p, double c) { return std::sqrt(2.0 * (p + 1.0)) / ((1.0 - p) * c); }

namespace {

// k (s - s_d)^beta with beta = 2/(1-p); exact dead-core solution.
struct ClosedForm {
  double k, beta, sd;
  double val(double s) const {
    const double t = s - sd;
    return t <= 0.0 ? 0.0 : k * std::pow(t, beta);
  }
};

ClosedForm closed_form(double p, double c, double sd) {
  ClosedForm cf;
  cf.beta = 2.0 / (1.0 - p);
  cf.k = std::pow((1.0 - p) * c / std::sqrt(2.0 * (p + 1.0)), cf.beta);
  cf.sd = sd;
  return cf;
}

// RK4 integration of X'' = c^2 X^p from (X0, 0); returns X(s0).
double shoot(double p, double c, double s0, double X0,
             std::vector<std::pair<double, double>>* samples = nullptr) {
  const int nSteps = 20000;
  const double ds = s0 / nSteps;
  double X = X0, V = 0.0;
  auto f = [&](double x) { return x <= 0.0 ? 0.0 : c * c * std::pow(x, p); };
  if (samples) samples->emplace_back(0.0, X);
  for (int i = 0; i < nSteps; ++i) {
    const double k1x = V, k1v = f(X);
    const double k2x = V + 0.5 * ds * k1v, k2v = f(X + 0.5 * ds * k1x);
    const double k3x = V + 0.5 * ds * k2v, k3v = f(X + 0.5 * ds * k2x);
    const double k4x = V + ds * k3v, k4v = f(X + ds * k3x);
    X += ds / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    V += ds / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    if (samples && (i + 1) % 40 == 0) samples->emplace_back(ds * (i + 1), X);
  }
  return X;
}

}  // namespace

double SupersolutionProfile::eval(double s) const {
  if (samples.empty()) return 0.0;
  if (s <= samples.front().first) return samples.front().second;
  if (s >= samples.back().first) return samples.back().second;
  const auto it = std::lower_bound(samples.begin(), samples.end(), s,
                                   [](const auto& a, double v) { return a.first < v; });
  const auto [s1, x1] = *it;
  const auto [s0_, x0] = *(it - 1);
  const double ds = s1 - s0_;
  const double t = (s - s0_) / ds;
  // Cubic Hermite with slopes from the exact first integral
  //   X'^2 = 2c^2/(p+1) (X^{p+1} - X0^{p+1}),  X' >= 0,
  // which makes the interpolant C1: linear interpolation leaves derivative
  // kinks at the knots that a discrete Laplacian of the evaluated profile
  // amplifies as 1/h.
  const double k = 2.0 * c * c / (p + 1.0);
  const double b = std::pow(X0, p + 1.0);
  auto slope = [&](double x) {
    const double q = k * (std::pow(std::max(x, 0.0), p + 1.0) - b);
    return q > 0.0 ? std::sqrt(q) : 0.0;
  };
  const double m0 = slope(x0) * ds, m1 = slope(x1) * ds;
  const double t2 = t * t, t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * x0 + (t3 - 2.0 * t2 + t) * m0 +
         (-2.0 * t3 + 3.0 * t2) * x1 + (t3 - t2) * m1;
}

SupersolutionProfile supersolution_profile(double p, double c, double s0) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("supersolution_profile: p in (0,1)");
  if (!(c > 0.0 && s0 > 0.0)) throw std::invalid_argument("supersolution_profile: c, s0 > 0");

  SupersolutionProfile prof;
  prof.p = p;
  prof.c = c;
  prof.s0 = s0;

  const double d = sperb_d(p, c);
  if (s0 >= d) {
    // Dead core: X == 0 on [0, s_d], then the power-law branch.
    const ClosedForm cf = closed_form(p, c, s0 - d);
    prof.hasDeadCore = true;
    prof.deadCoreOnset = cf.sd;
    prof.X0 = 0.0;
    const int nS = 600;
    for (int i = 0; i <= nS; ++i) {
      const double s = s0 * i / nS;
      prof.samples.emplace_back(s, cf.val(s));
    }
    return prof;
  }

  // Shooting on X(0): X(s0; X0) increases with X0.
  double lo = 0.0, hi = 1.0;
  if (shoot(p, c, s0, 0.0) > 1.0)
    throw std::runtime_error("supersolution_profile: bisection bracket failed at X0=0");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shoot(p, c, s0, mid) < 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15) break;
  }
  prof.X0 = 0.5 * (lo + hi);
  prof.hasDeadCore = false;
  prof.deadCoreOnset = 0.0;
  std::vector<std::pair<double, double>> raw;
  shoot(p, c, s0, prof.X0, &raw);
  prof.samples = std::move(raw);
  // endpoint condition X(s0) = 1 pinned exactly
  if (!prof.samples.empty() && std::abs(prof.samples.back().first - s0) < 1e-12)
    prof.samples.back().second = 1.0;
  else
    prof.samples.emplace_back(s0, 1.0);
  return prof;
}

DeadCoreRadius predicted_deadcore_radius(double p, double c, double delta, double R, int n) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("predicted_deadcore_radius: p in (0,1)");
  if (!(c > 0.0 && delta > 0.0 && R > 0.0))
    throw std::invalid_argument("predicted_deadcore_radius: c, delta, R > 0");
  DeadCoreRadius out;
  out.cHat = c / std::pow(delta, 0.5 * (1.0 - p));
  out.d = sperb_d(p, out.cHat);
  const double sd = std::sqrt(double(n)) * out.d;
  if (R >= sd) {
    out.predicted = true;
    out.R0 = sd;
  } else if (R > 0.5 * sd) {
    out.predicted = true;
    out.R0 = 2.0 * R - sd;
  } else {
    out.predicted = false;  // outside the two-case formula
  }
  return out;
}

namespace {

// Exact squared Euclidean distance transform (Felzenszwalb-Huttenlocher),
// 1D pass applied per dimension.
void dt1d(const std::vector<double>& f, std::vector<double>& out) {
  const int n = static_cast<int>(f.size());
  out.assign(n, 0.0);
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s;
    while (true) {
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    out[q] = (q - v[k]) * (q - v[k]) + f[v[k]];
  }
}

// Distance (in node units) from each node to the nearest node where
// seed == true.
std::vector<double> distance_transform(const Grid& g, const std::vector<char>& seed) {
  const double INF = 1e18;
  const int nx = g.npts[0], ny = g.npts[1];
  std::vector<double> d(g.numNodes);
  for (int i = 0; i < g.numNodes; ++i) d[i] = seed[i] ? 0.0 : INF;
  std::vector<double> col(std::max(nx, ny)), res(std::max(nx, ny));
  // pass along x
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) col[ix] = d[g.index(ix, iy)];
    col.resize(nx);
    dt1d(col, res);
    for (int ix = 0; ix < nx; ++ix) d[g.index(ix, iy)] = res[ix];
    col.resize(std::max(nx, ny));
  }
  if (g.n == 2) {
    for (int ix = 0; ix < nx; ++ix) {
      col.resize(ny);
      for (int iy = 0; iy < ny; ++iy) col[iy] = d[g.index(ix, iy)];
      dt1d(col, res);
      for (int iy = 0; iy < ny; ++iy) d[g.index(ix, iy)] = res[iy];
      col.resize(std::max(nx, ny));
    }
  }
  for (double& v : d) v = std::sqrt(v);
  return d;
}

}  // namespace

DeadCoreReport detect_deadcore(const Field& u, const MinimaSet& minima, double tolCore,
                               const std::optional<DeadCorePrediction>& pred) {
  if (!(tolCore > 0.0)) throw std::invalid_argument("detect_deadcore: tolCore > 0");
  const Grid& g = u.grid;
  DeadCoreReport rep;
  rep.tolCore = tolCore;

  std::optional<DeadCoreRadius> radius;
  if (pred) {
    radius = predicted_deadcore_radius(pred->p, pred->c, pred->delta, pred->R, g.n);
  }

  for (int k = 0; k < minima.count(); ++k) {
    const Vec& a = minima.points[k];
    std::vector<char> core(g.numNodes, 0), notCore(g.numNodes, 0);
    long total = 0;
    for (int i = 0; i < g.numNodes; ++i) {
      // The core lives in the active domain; outside the ball mask counts
      // as non-core so inradii are measured against the domain boundary.
      bool active = true;
      if (g.ballR) active = g.node_pos(i).norm() < *g.ballR;
      const bool isCore = active && (u.values.col(i) - a).norm() <= tolCore;
      core[i] = isCore;
      notCore[i] = !isCore;
      total += isCore;
    }
    DeadCoreEntry entry;
    entry.minimum = a;
    if (total == 0) {
      rep.perMinimum.push_back(std::move(entry));
      continue;
    }
    // Depth = distance to the nearest non-core node; seed the component
    // search at the deepest core node.
    std::vector<double> depth = distance_transform(g, notCore);
    int seedIdx = -1;
    double best = -1.0;
    for (int i = 0; i < g.numNodes; ++i) {
      if (core[i] && depth[i] > best) {
        best = depth[i];
        seedIdx = i;
      }
    }
    // Connected component of the core containing the deepest node.
    std::vector<char> comp(g.numNodes, 0);
    std::deque<int> queue{seedIdx};
    comp[seedIdx] = 1;
    const int nx = g.npts[0];
    while (!queue.empty()) {
      const int i = queue.front();
      queue.pop_front();
      const int ix = i % nx, iy = i / nx;
      auto push = [&](int j) {
        if (j >= 0 && j < g.numNodes && core[j] && !comp[j]) {
          comp[j] = 1;
          queue.push_back(j);
        }
      };
      if (ix > 0) push(i - 1);
      if (ix + 1 < nx) push(i + 1);
      if (g.n == 2) {
        if (iy > 0) push(i - nx);
        if (iy + 1 < g.npts[1]) push(i + nx);
      }
    }
    long count = 0;
    double inr = 0.0;
    for (int i = 0; i < g.numNodes; ++i) {
      if (comp[i]) {
        ++count;
        inr = std::max(inr, depth[i]);
      }
    }
    entry.coreCellCount = count;
    entry.coreInradius = std::max(inr - 1.0, 0.0) * g.h;
    if (radius && radius->predicted) {
      entry.predictedR0 = radius->R0;
      // Does the core contain {dist(., boundary ball) >= R0}?
      bool contains = true;
      const double R = pred->R;
      for (int i = 0; i < g.numNodes; ++i) {
        const Vec x = g.node_pos(i);
        if (R - x.norm() >= radius->R0 && !comp[i]) contains = false;
      }
      entry.containsPredictedCore = contains;
    }
    rep.perMinimum.push_back(std::move(entry));
  }
  return rep;
}

double verify_supersolution(double p, double c, double R, int n, double h) {
  if (n != 2) throw std::invalid_argument("verify_supersolution: grid dimension 2 shipped");
  const Vec x0 = Vec::Zero(n);
  const TorsionBall tb = torsion_ball(R, n, x0);
  const SupersolutionProfile prof = supersolution_profile(p, c, tb.s0());

  const Grid g = Grid::make(n, h, R, R);
  Field ub = make_field(g, 1);
  for (int i = 0; i < g.numNodes; ++i) {
    ub.values(0, i) = prof.eval(tb.s(g.node_pos(i)));
  }
  // Prefer the closed form when available: removes table interpolation
  // error from the consistency measurement.
  const double d = sperb_d(p, c);
  const bool closed = tb.s0() >= d;
  const double beta = 2.0 / (1.0 - p);
  const double kcf = std::pow((1.0 - p) * c / std::sqrt(2.0 * (p + 1.0)), beta);
  const double sd = tb.s0() - d;
  if (closed) {
    for (int i = 0; i < g.numNodes; ++i) {
      const double t = tb.s(g.node_pos(i)) - sd;
      ub.values(0, i) = t <= 0.0 ? 0.0 : kcf * std::pow(t, beta);
    }
  }

  double worst = 0.0;
  const int nx = g.npts[0];
  for (int iy = 1; iy + 1 < g.npts[1]; ++iy) {
    for (int ix = 1; ix + 1 < nx; ++ix) {
      const int i = g.index(ix, iy);
      const Vec x = g.node_pos(i);
      if (x.norm() >= R - h) continue;  // need full interior stencil in the ball
      const double lap = (ub.values(0, i - 1) + ub.values(0, i + 1) + ub.values(0, i - nx) +
                          ub.values(0, i + nx) - 4.0 * ub.values(0, i)) /
                         (h * h);
      const double rhs = c * c * std::pow(std::max(ub.values(0, i), 0.0), p);
      worst = std::max(worst, lap - rhs);
    }
  }
  return worst;
}

double hat_c_constant(double alpha, int n, double C0, double C1, double cStar, double rho0) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("hat_c_constant: alpha in (0,2) required");
  if (!(C0 > 0.0 && C1 > 0.0 && cStar > 0.0 && rho0 > 0.0))
    throw std::invalid_argument("hat_c_constant: constants must be positive");
  const double first = std::pow(2.0, alpha + 2.0) * C0 / (C1 * cStar);
  const double second = 2.0 * std::sqrt(double(n) * (alpha + 2.0)) /
                        ((1.0 - 0.5 * alpha) * std::sqrt(2.0 * alpha * cStar)) *
                        std::pow(0.5 * rho0, 1.0 + 0.5 * alpha);
  return first + second;
}

double DeadCoreModelDensity::value(Eigen::Ref<const Vec> u) const {
  const double q = 0.5 * (2.0 + alpha);
  return 2.0 * c * c / (2.0 + alpha) * std::pow(std::abs(u[0]), q);
}

void DeadCoreModelDensity::grad(Eigen::Ref<const Vec> u, Eigen::Ref<Vec> g) const {
  const double v = u[0];
  if (v == 0.0) {
    g[0] = 0.0;  // designated subgradient on the core
    return;
  }
  g[0] = c * c * std::pow(std::abs(v), 0.5 * alpha) * (v > 0 ? 1.0 : -1.0);
}

}  // namespace ac
