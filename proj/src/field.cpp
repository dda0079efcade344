#include "ac/field.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ac {

Grid Grid::make(int n, double h, double L, std::optional<double> ballR) {
  if (n != 1 && n != 2) throw std::invalid_argument("Grid: n must be 1 or 2");
  if (!(h > 0.0)) throw std::invalid_argument("Grid: h > 0 required");
  const double cellsD = L / h;
  const long cells = std::lround(cellsD);
  if (std::abs(cellsD - cells) > 1e-9 * std::max(1.0, cellsD))
    throw std::invalid_argument("Grid: L/h must be integral");
  if (ballR && !(*ballR <= L + 1e-12))
    throw std::invalid_argument("Grid: ball radius exceeds box");
  Grid g;
  g.n = n;
  g.h = h;
  g.L = L;
  g.ballR = ballR;
  g.npts[0] = static_cast<int>(2 * cells + 1);
  g.npts[1] = (n == 2) ? g.npts[0] : 1;
  g.numNodes = g.npts[0] * g.npts[1];
  return g;
}

Vec Grid::node_pos(int idx) const {
  Vec x(n);
  const int ix = idx % npts[0];
  x[0] = coord(ix);
  if (n == 2) x[1] = coord(idx / npts[0]);
  return x;
}

bool Grid::node_free_geom(int idx) const {
  const int ix = idx % npts[0];
  const int iy = idx / npts[0];
  if (ix == 0 || ix == npts[0] - 1) return false;
  if (n == 2 && (iy == 0 || iy == npts[1] - 1)) return false;
  if (ballR) {
    double r2 = coord(ix) * coord(ix);
    if (n == 2) r2 += coord(iy) * coord(iy);
    if (r2 >= (*ballR) * (*ballR)) return false;
  }
  return true;
}

Vec Field::interpolate(const Vec& x) const {
  const Grid& g = grid;
  auto clamp01 = [&](double c) {
    return std::min(std::max(c, -g.L), g.L);
  };
  const double fx = (clamp01(x[0]) + g.L) / g.h;
  int ix = static_cast<int>(std::floor(fx));
  ix = std::min(std::max(ix, 0), g.npts[0] - 2);
  const double tx = fx - ix;
  if (g.n == 1) {
    return (1.0 - tx) * values.col(g.index(ix)) + tx * values.col(g.index(ix + 1));
  }
  const double fy = (clamp01(x[1]) + g.L) / g.h;
  int iy = static_cast<int>(std::floor(fy));
  iy = std::min(std::max(iy, 0), g.npts[1] - 2);
  const double ty = fy - iy;
  return (1.0 - tx) * (1.0 - ty) * values.col(g.index(ix, iy)) +
         tx * (1.0 - ty) * values.col(g.index(ix + 1, iy)) +
         (1.0 - tx) * ty * values.col(g.index(ix, iy + 1)) +
         tx * ty * values.col(g.index(ix + 1, iy + 1));
}

Field make_field(const Grid& g, int m, BCKind bc) {
  Field f;
  f.grid = g;
  f.m = m;
  f.bc = bc;
  f.values = Mat::Zero(m, g.numNodes);
  f.free_mask.assign(g.numNodes, 0);
  for (int i = 0; i < g.numNodes; ++i) {
    f.free_mask[i] = (bc == BCKind::Free) ? 1 : (g.node_free_geom(i) ? 1 : 0);
  }
  return f;
}

void set_constant(Field& f, const Vec& c) {
  if (c.size() != f.m) throw std::invalid_argument("set_constant: dimension mismatch");
  f.values.colwise() = c;
}

Vec affine_competitor_value(const EquivariantSetup& setup, const Vec& x) {
  const int gi = chamber_element(setup.group, setup.dNormals, x);
  const Mat& g = setup.group.elements[gi];
  const Vec y = g.transpose() * x;
  const double d = std::max(setup.dist_to_dD(y), 0.0);
  return std::min(d, 1.0) * (g * setup.a1);
}

Field init_affine_competitor(const Grid& g, const EquivariantSetup& setup, BCKind bc) {
  Field f = make_field(g, static_cast<int>(setup.a1.size()), bc);
  for (int i = 0; i < g.numNodes; ++i) {
    f.values.col(i) = affine_competitor_value(setup, g.node_pos(i));
  }
  return f;
}

Field init_custom(const Grid& g, int m, const std::function<Vec(const Vec&)>& fn, BCKind bc) {
  Field f = make_field(g, m, bc);
  for (int i = 0; i < g.numNodes; ++i) f.values.col(i) = fn(g.node_pos(i));
  return f;
}

namespace detail {

void for_each_cell(const Grid& g, const std::optional<double>& restrictR,
                   const Vec* center,
                   const std::function<void(int, const std::array<int, 2>&)>& fn) {
  const int nx = g.npts[0];
  const int ny = g.npts[1];
  const double half = 0.5 * g.h;
  if (g.n == 1) {
    for (int ix = 0; ix + 1 < nx; ++ix) {
      if (restrictR) {
        const double cx = g.coord(ix) + half - (center ? (*center)[0] : 0.0);
        if (std::abs(cx) >= *restrictR) continue;
      }
      fn(ix, {ix + 1, -1});
    }
    return;
  }
  const double r2 = restrictR ? (*restrictR) * (*restrictR) : 0.0;
  for (int iy = 0; iy + 1 < ny; ++iy) {
    for (int ix = 0; ix + 1 < nx; ++ix) {
      const int idx = g.index(ix, iy);
      if (restrictR) {
        const double cx = g.coord(ix) + half - (center ? (*center)[0] : 0.0);
        const double cy = g.coord(iy) + half - (center ? (*center)[1] : 0.0);
        if (cx * cx + cy * cy >= r2) continue;
      }
      fn(idx, {idx + 1, idx + nx});
    }
  }
}

}  // namespace detail

EnergyBreakdown total_energy(const Field& u, const EnergyDensity& p) {
  if (p.dim() != u.m) throw std::invalid_argument("total_energy: dimension mismatch");
  const Grid& g = u.grid;
  const double hn = std::pow(g.h, g.n);
  const double inv_h2 = 1.0 / (g.h * g.h);
  double dir = 0.0, pot = 0.0;
  detail::for_each_cell(g, g.ballR, nullptr, [&](int c, const std::array<int, 2>& nb) {
    for (int d = 0; d < g.n; ++d) {
      dir += 0.5 * inv_h2 * (u.values.col(nb[d]) - u.values.col(c)).squaredNorm();
    }
    pot += p.value(u.values.col(c));
  });
  EnergyBreakdown e;
  e.dirichlet = dir * hn;
  e.potential = pot * hn;
  e.total = e.dirichlet + e.potential;
  return e;
}

std::vector<std::pair<double, double>> energy_profile(
    const Field& u, const EnergyDensity& p, const Vec& center,
    const std::vector<double>& radii) {
  const Grid& g = u.grid;
  for (double r : radii) {
    for (int d = 0; d < g.n; ++d) {
      if (std::abs(center[d]) + r > g.L + 1e-12)
        throw std::invalid_argument("energy_profile: radius exceeds domain");
    }
  }
  const double hn = std::pow(g.h, g.n);
  const double inv_h2 = 1.0 / (g.h * g.h);
  std::vector<std::pair<double, double>> out;
  out.reserve(radii.size());
  for (double r : radii) {
    double acc = 0.0;
    detail::for_each_cell(g, r, &center, [&](int c, const std::array<int, 2>& nb) {
      for (int d = 0; d < g.n; ++d) {
        acc += 0.5 * inv_h2 * (u.values.col(nb[d]) - u.values.col(c)).squaredNorm();
      }
      acc += p.value(u.values.col(c));
    });
    out.emplace_back(r, acc * hn);
  }
  return out;
}

Mat first_variation(const Field& u, const EnergyDensity& p) {
  if (!p.differentiable())
    throw std::logic_error("first_variation: potential has no pointwise gradient");
  const Grid& g = u.grid;
  const double inv_h2 = 1.0 / (g.h * g.h);
  Mat fv = Mat::Zero(u.m, g.numNodes);
  Vec wg(u.m);
  detail::for_each_cell(g, g.ballR, nullptr, [&](int c, const std::array<int, 2>& nb) {
    for (int d = 0; d < g.n; ++d) {
      const auto diff = (u.values.col(c) - u.values.col(nb[d])) * inv_h2;
      fv.col(c) += diff;
      fv.col(nb[d]) -= diff;
    }
    p.grad(u.values.col(c), wg);
    fv.col(c) += wg;
  });
  for (int i = 0; i < g.numNodes; ++i) {
    if (!u.free_mask[i]) fv.col(i).setZero();
  }
  return fv;
}

void write_field_csv(const Field& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
  out.precision(17);
  out << "x";
  if (u.grid.n == 2) out << ",y";
  for (int c = 0; c < u.m; ++c) out << ",u" << (c + 1);
  out << "\n";
  for (int i = 0; i < u.grid.numNodes; ++i) {
    const Vec x = u.grid.node_pos(i);
    out << x[0];
    if (u.grid.n == 2) out << "," << x[1];
    for (int c = 0; c < u.m; ++c) out << "," << u.values(c, i);
    out << "\n";
  }
}

void write_curve_csv(const std::vector<std::pair<double, double>>& curve,
                     const std::string& path, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_curve_csv: cannot open " + path);
  out.precision(17);
  out << header << "\n";
  for (const auto& [a, b] : curve) out << a << "," << b << "\n";
}

}  // namespace ac
