#include "ac/diagnostics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ac {

namespace {

Vec project_to_segment(const Vec& a, const Vec& b, const Vec& v) {
  const Vec d = b - a;
  const double t = std::clamp((v - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return a + t * d;
}

}  // namespace

Vec project_to_hull(const MinimaSet& minima, const Vec& v) {
  const int m = minima.m;
  if (m == 1) {
    double lo = minima.points[0][0], hi = lo;
    for (const Vec& p : minima.points) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    Vec out(1);
    out[0] = std::clamp(v[0], lo, hi);
    return out;
  }
  if (m == 2 && minima.count() == 3) {
    // triangle: inside test via barycentric, else nearest edge point
    const Vec &A = minima.points[0], &B = minima.points[1], &C = minima.points[2];
    Mat E(2, 2);
    E.col(0) = B - A;
    E.col(1) = C - A;
    const Vec lam = E.fullPivLu().solve(v - A);
    if (lam[0] >= 0.0 && lam[1] >= 0.0 && lam[0] + lam[1] <= 1.0) return v;
    Vec best = project_to_segment(A, B, v);
    for (const auto& [p, q] : {std::pair{A, C}, std::pair{B, C}}) {
      const Vec cand = project_to_segment(p, q, v);
      if ((cand - v).norm() < (best - v).norm()) best = cand;
    }
    return best;
  }
  if (m == 2) {
    // hull of collinear or >3 points in the plane: min over segments
    Vec best = minima.points[0];
    for (int i = 0; i < minima.count(); ++i) {
      for (int j = i + 1; j < minima.count(); ++j) {
        const Vec cand = project_to_segment(minima.points[i], minima.points[j], v);
        if ((cand - v).norm() < (best - v).norm()) best = cand;
      }
    }
    return best;
  }
  throw std::invalid_argument("project_to_hull: m in {1,2} shipped");
}

double containment_check(const Field& u, const MinimaSet& minima) {
  if (minima.m != u.m) throw std::invalid_argument("containment_check: dimension mismatch");
  if (minima.m >= 2 && minima.count() != minima.m + 1)
    throw std::invalid_argument("containment_check: need a simplex (N = m+1) for m >= 2");
  if (minima.m >= 2 && !minima.nondegenerate_simplex())
    throw std::invalid_argument("containment_check: degenerate hull");
  double worst = 0.0;
  for (int i = 0; i < u.grid.numNodes; ++i) {
    const Vec v = u.values.col(i);
    worst = std::max(worst, (v - project_to_hull(minima, v)).norm());
  }
  return worst;
}

std::vector<std::pair<double, double>> density_curve(const Field& u, const Vec& a,
                                                     double lambda, const Vec& center,
                                                     const std::vector<double>& radii) {
  if (!(lambda > 0.0)) throw std::invalid_argument("density_curve: lambda > 0");
  const Grid& g = u.grid;
  const double hn = std::pow(g.h, g.n);
  std::vector<std::pair<double, double>> out;
  for (double r : radii) {
    long count = 0;
    detail::for_each_cell(g, r, &center, [&](int c, const std::array<int, 2>&) {
      if ((u.values.col(c) - a).norm() > lambda) ++count;
    });
    out.emplace_back(r, count * hn);
  }
  return out;
}

PhaseCurves phase_volume_perimeter(const Field& u, const MinimaSet& minima, double tol,
                                   const Vec& center, const std::vector<double>& radii) {
  if (!(tol > 0.0)) throw std::invalid_argument("phase_volume_perimeter: tol > 0");
  const Grid& g = u.grid;
  const double hn = std::pow(g.h, g.n);
  const double hs = std::pow(g.h, g.n - 1);
  PhaseCurves out;
  out.volume.resize(minima.count());
  out.perimeter.resize(minima.count());
  for (int k = 0; k < minima.count(); ++k) {
    const Vec& a = minima.points[k];
    std::vector<char> in(g.numNodes, 0);
    for (int i = 0; i < g.numNodes; ++i) in[i] = (u.values.col(i) - a).norm() <= tol;
    for (double r : radii) {
      long vol = 0, per = 0;
      detail::for_each_cell(g, r, &center, [&](int c, const std::array<int, 2>& nb) {
        if (in[c]) ++vol;
        for (int d = 0; d < g.n; ++d) {
          if (in[c] != in[nb[d]]) ++per;
        }
      });
      out.volume[k].emplace_back(r, vol * hn);
      out.perimeter[k].emplace_back(r, per * hs);
    }
  }
  return out;
}

double log_modulus(const Field& u, int nPairs, std::uint64_t seed) {
  const Grid& g = u.grid;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, g.numNodes - 1);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> dist(g.h, 0.5);
  double worst = 0.0;
  int made = 0;
  int guard = 0;
  while (made < nPairs && guard < 50 * nPairs) {
    ++guard;
    const int i = pick(rng);
    const Vec x = g.node_pos(i);
    const double r = dist(rng);
    Vec y = x;
    if (g.n == 1) {
      y[0] += (rng() & 1 ? r : -r);
    } else {
      const double t = angle(rng);
      y[0] += r * std::cos(t);
      y[1] += r * std::sin(t);
    }
    bool inside = true;
    for (int d = 0; d < g.n; ++d) {
      if (std::abs(y[d]) > g.L) inside = false;
    }
    if (!inside) continue;
    const double dxy = (y - x).norm();
    if (dxy < g.h || dxy > 0.5) continue;
    const double denom = dxy * std::log(1.0 / dxy);
    worst = std::max(worst, (u.interpolate(y) - u.values.col(i)).norm() / denom);
    ++made;
  }
  return worst;
}

FreeBoundaryGradStats free_boundary_gradient(const Field& u, const MinimaSet& minima,
                                             double tolCore, AlphaKind /*kind*/) {
  const Grid& g = u.grid;
  std::vector<char> core(g.numNodes, 0);
  for (int i = 0; i < g.numNodes; ++i) {
    core[i] = minima.dist_to_nearest(u.values.col(i)) <= tolCore;
  }
  FreeBoundaryGradStats stats;
  std::vector<double> vals;
  const int nx = g.npts[0];
  for (int i = 0; i < g.numNodes; ++i) {
    if (core[i]) continue;
    const int ix = i % nx, iy = i / nx;
    bool adj = false;
    auto isCore = [&](int j) { return j >= 0 && j < g.numNodes && core[j]; };
    if (ix > 0 && isCore(i - 1)) adj = true;
    if (ix + 1 < nx && isCore(i + 1)) adj = true;
    if (g.n == 2) {
      if (iy > 0 && isCore(i - nx)) adj = true;
      if (iy + 1 < g.npts[1] && isCore(i + nx)) adj = true;
    }
    if (!adj) continue;
    // one-sided difference toward the non-core side per axis
    double g2 = 0.0;
    auto axis_term = [&](int jm, int jp, bool hasM, bool hasP) {
      const bool mNon = hasM && !core[jm];
      const bool pNon = hasP && !core[jp];
      Vec diff = Vec::Zero(u.m);
      if (mNon && pNon) {
        diff = (u.values.col(jp) - u.values.col(jm)) / (2.0 * g.h);
      } else if (pNon) {
        diff = (u.values.col(jp) - u.values.col(i)) / g.h;
      } else if (mNon) {
        diff = (u.values.col(i) - u.values.col(jm)) / g.h;
      }
      g2 += diff.squaredNorm();
    };
    axis_term(i - 1, i + 1, ix > 0, ix + 1 < nx);
    if (g.n == 2) axis_term(i - nx, i + nx, iy > 0, iy + 1 < g.npts[1]);
    vals.push_back(g2);
  }
  if (vals.empty()) return stats;
  stats.empty = false;
  stats.samples = static_cast<long>(vals.size());
  double sum = 0.0;
  for (double v : vals) {
    sum += v;
    stats.maxv = std::max(stats.maxv, v);
  }
  stats.mean = sum / vals.size();
  stats.histogram.assign(20, 0.0);
  const double top = stats.maxv > 0 ? stats.maxv : 1.0;
  for (double v : vals) {
    int bin = std::min(static_cast<int>(v / top * 20.0), 19);
    stats.histogram[bin] += 1.0;
  }
  return stats;
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& profile) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [r, J] : profile) {
    if (r > 0.0 && J > 0.0) pts.emplace_back(std::log(r), std::log(J));
  }
  if (pts.size() < 3) throw std::invalid_argument("scaling_fit: need >= 3 usable points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  ScalingFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

}  // namespace ac
