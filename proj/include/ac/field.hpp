#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ac/potential.hpp"
#include "ac/symmetry.hpp"
#include "ac/types.hpp"

namespace ac {

// Uniform node grid on the box [-L,L]^n, n in {1,2}; an optional ball
// mask restricts the active domain to B_R(0).
struct Grid {
  int n = 1;
  double h = 0.1;
  double L = 1.0;
  std::optional<double> ballR;

  std::array<int, 2> npts = {0, 1};  // nodes per dim (npts[1] = 1 in 1D)
  int numNodes = 0;

  static Grid make(int n, double h, double L,
                   std::optional<double> ballR = std::nullopt);

  int index(int ix, int iy = 0) const { return ix + npts[0] * iy; }
  double coord(int i) const { return -L + h * i; }
  Vec node_pos(int idx) const;
  bool node_free_geom(int idx) const;  // strictly inside box and ball
};

enum class BCKind : std::uint8_t { Dirichlet, Free };

struct Field {
  Grid grid;
  int m = 1;
  BCKind bc = BCKind::Dirichlet;
  Mat values;                      // m x numNodes
  std::vector<std::uint8_t> free_mask;  // 1 = solver degree of freedom

  Vec value_at(int idx) const { return values.col(idx); }
  // Multilinear interpolation; coordinates clamped to the box.
  Vec interpolate(const Vec& x) const;
};

struct EnergyBreakdown {
  double dirichlet = 0.0;
  double potential = 0.0;
  double total = 0.0;
};

Field make_field(const Grid& g, int m, BCKind bc = BCKind::Dirichlet);
void set_constant(Field& f, const Vec& c);

// The affine competitor: u_aff(x) = min(dist(x, dD), 1) a1 in D, extended
// equivariantly; vanishes on dD so the extension is continuous.
Field init_affine_competitor(const Grid& g, const EquivariantSetup& setup,
                             BCKind bc = BCKind::Dirichlet);
Vec affine_competitor_value(const EquivariantSetup& setup, const Vec& x);

Field init_custom(const Grid& g, int m, const std::function<Vec(const Vec&)>& fn,
                  BCKind bc = BCKind::Dirichlet);

// Forward differences on cell edges, nodal W quadrature at the cell's
// lower corner; deterministic lexicographic summation.
EnergyBreakdown total_energy(const Field& u, const EnergyDensity& p);

// Restricted energies J_{B_r(center)}; cells count iff their center lies
// in the ball. Nondecreasing in r.
std::vector<std::pair<double, double>> energy_profile(
    const Field& u, const EnergyDensity& p, const Vec& center,
    const std::vector<double>& radii);

// Exact gradient of the discrete energy, scaled by h^{-n}: equals
// -Lap_h u + W_u(u) at interior points; zero at non-free nodes.
Mat first_variation(const Field& u, const EnergyDensity& p);

void write_field_csv(const Field& u, const std::string& path);
void write_curve_csv(const std::vector<std::pair<double, double>>& curve,
                     const std::string& path, const std::string& header);

namespace detail {
// Visit counted cells: callback(cornerIdx, neighborIdx[dim] per dim).
void for_each_cell(const Grid& g, const std::optional<double>& restrictR,
                   const Vec* center,
                   const std::function<void(int, const std::array<int, 2>&)>& fn);
}  // namespace detail

}  // namespace ac
