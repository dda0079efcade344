#include "ac/symmetry.hpp"

#include <cmath>
#include <stdexcept>

#include "ac/field.hpp"

namespace ac {

namespace {

bool mat_close(const Mat& a, const Mat& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

int find_element(const std::vector<Mat>& els, const Mat& m, double tol = 1e-10) {
  for (size_t i = 0; i < els.size(); ++i) {
    if (mat_close(els[i], m, tol)) return static_cast<int>(i);
  }
  return -1;
}

// Extract reflections gamma = I - 2 n n^T: orthogonal, symmetric,
// with eigenvalue -1 of multiplicity one.
void collect_reflections(ReflectionGroup& g, double tol = 1e-10) {
  const Mat I = Mat::Identity(g.n, g.n);
  g.reflections.clear();
  g.reflectionNormals.clear();
  for (const Mat& e : g.elements) {
    if (!mat_close(e, e.transpose(), tol)) continue;
    Eigen::SelfAdjointEigenSolver<Mat> es(e);
    int negCount = 0;
    int negIdx = -1;
    for (int i = 0; i < g.n; ++i) {
      if (es.eigenvalues()[i] < 0.0) {
        ++negCount;
        negIdx = i;
      }
    }
    if (negCount != 1) continue;
    Vec nrm = es.eigenvectors().col(negIdx);
    nrm.normalize();
    if (!mat_close(e, I - 2.0 * nrm * nrm.transpose(), 1e-8)) continue;
    g.reflections.push_back(e);
    g.reflectionNormals.push_back(nrm);
  }
}

Vec generic_base_point(const ReflectionGroup& g) {
  if (g.n == 2 && !g.reflectionNormals.empty()) {
    // dihedral-style: bisector of the standard chamber
    int k = static_cast<int>(g.reflections.size());
    if (k >= 2) {
      const double t = M_PI / (2.0 * k);
      Vec b(2);
      b << std::cos(t), std::sin(t);
      return b;
    }
  }
  Vec b(g.n);
  for (int i = 0; i < g.n; ++i) b[i] = 1.0 / (1.0 + 0.37 * i);
  return b;
}

}  // namespace

void ReflectionGroup::validate(double tol) const {
  const Mat I = Mat::Identity(n, n);
  if (find_element(elements, I, tol) < 0)
    throw std::invalid_argument("ReflectionGroup: identity missing");
  for (const Mat& e : elements) {
    if (!mat_close(e.transpose() * e, I, 1e-12))
      throw std::invalid_argument("ReflectionGroup: non-orthogonal element");
  }
  for (const Mat& a : elements) {
    for (const Mat& b : elements) {
      if (find_element(elements, a * b, tol) < 0)
        throw std::invalid_argument("ReflectionGroup: not closed under product");
    }
  }
}

ReflectionGroup build_dihedral(int k) {
  if (k < 2) throw std::invalid_argument("build_dihedral: k >= 2 required");
  ReflectionGroup g;
  g.n = 2;
  for (int j = 0; j < k; ++j) {
    const double t = 2.0 * M_PI * j / k;
    Mat r(2, 2);
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    g.elements.push_back(r);
  }
  for (int j = 0; j < k; ++j) {
    const double t = M_PI * j / k;  // mirror line angle
    Mat s(2, 2);
    s << std::cos(2 * t), std::sin(2 * t), std::sin(2 * t), -std::cos(2 * t);
    g.elements.push_back(s);
  }
  collect_reflections(g);
  return g;
}

ReflectionGroup build_coordinate(int n) {
  if (n < 1) throw std::invalid_argument("build_coordinate: n >= 1 required");
  ReflectionGroup g;
  g.n = n;
  const int total = 1 << n;
  for (int mask = 0; mask < total; ++mask) {
    Vec d = Vec::Ones(n);
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) d[i] = -1.0;
    }
    g.elements.push_back(d.asDiagonal());
  }
  collect_reflections(g);
  return g;
}

ReflectionGroup build_group_from_matrices(const std::vector<Mat>& mats) {
  if (mats.empty()) throw std::invalid_argument("build_group_from_matrices: empty");
  ReflectionGroup g;
  g.n = static_cast<int>(mats[0].rows());
  g.elements = mats;
  g.validate();
  collect_reflections(g);
  return g;
}

std::vector<Vec> fundamental_region(const ReflectionGroup& g) {
  if (g.elements.empty()) throw std::invalid_argument("fundamental_region: empty group");
  if (g.reflections.empty())
    throw std::invalid_argument("fundamental_region: group has no reflections");
  // The group must be generated by its reflections for chambers to tile.
  {
    std::vector<Mat> gen = g.reflections;
    gen.push_back(Mat::Identity(g.n, g.n));
    bool grew = true;
    while (grew) {
      grew = false;
      for (size_t i = 0; i < gen.size(); ++i) {
        for (size_t j = 0; j < gen.size(); ++j) {
          Mat p = gen[i] * gen[j];
          if (find_element(gen, p) < 0) {
            gen.push_back(p);
            grew = true;
          }
        }
      }
    }
    if (gen.size() != g.elements.size())
      throw std::invalid_argument("fundamental_region: group not generated by reflections");
  }

  const Vec b = generic_base_point(g);
  std::vector<Vec> normals;
  for (const Vec& nrm : g.reflectionNormals) {
    const double s = b.dot(nrm);
    if (std::abs(s) < 1e-12)
      throw std::invalid_argument("fundamental_region: base point on a mirror");
    Vec oriented = (s > 0 ? 1.0 : -1.0) * nrm;
    bool dup = false;
    for (const Vec& q : normals) {
      if ((q - oriented).norm() < 1e-10) dup = true;
    }
    if (!dup) normals.push_back(oriented);
  }
  return normals;
}

bool EquivariantSetup::in_F_closure(const Vec& x, double tol) const {
  for (const Vec& nrm : fNormals) {
    if (x.dot(nrm) < -tol) return false;
  }
  return true;
}

bool EquivariantSetup::in_D(const Vec& x, double tol) const {
  for (const Vec& nrm : dNormals) {
    if (x.dot(nrm) <= tol) return false;
  }
  return true;
}

double EquivariantSetup::dist_to_dD(const Vec& x) const {
  if (dNormals.empty()) return std::numeric_limits<double>::infinity();
  double d = std::numeric_limits<double>::infinity();
  for (const Vec& nrm : dNormals) d = std::min(d, x.dot(nrm));
  return d;
}

EquivariantSetup stabilizer_region(const ReflectionGroup& g, const Vec& a1) {
  if (a1.size() != g.n) throw std::invalid_argument("stabilizer_region: dimension mismatch");
  if (a1.norm() < 1e-14) throw std::invalid_argument("stabilizer_region: a1 must be nonzero");
  EquivariantSetup s;
  s.group = g;
  s.fNormals = fundamental_region(g);
  s.a1 = a1;
  for (const Vec& nrm : s.fNormals) {
    if (a1.dot(nrm) < -1e-12)
      throw std::invalid_argument("stabilizer_region: a1 not in closure(F)");
  }
  for (const Mat& e : g.elements) {
    if ((e * a1 - a1).norm() <= 1e-10) s.stabilizer.push_back(e);
  }
  // D: half-spaces of the non-stabilizing mirrors, oriented toward a1.
  for (size_t i = 0; i < g.reflections.size(); ++i) {
    const double d = a1.dot(g.reflectionNormals[i]);
    if (std::abs(d) <= 1e-10) continue;  // mirror fixes a1
    Vec oriented = (d > 0 ? 1.0 : -1.0) * g.reflectionNormals[i];
    bool dup = false;
    for (const Vec& q : s.dNormals) {
      if ((q - oriented).norm() < 1e-10) dup = true;
    }
    if (!dup) s.dNormals.push_back(oriented);
  }
  s.orbit.push_back(a1);
  for (const Mat& e : g.elements) {
    const Vec p = e * a1;
    bool seen = false;
    for (const Vec& q : s.orbit) {
      if ((p - q).norm() <= 1e-10) seen = true;
    }
    if (!seen) s.orbit.push_back(p);
  }
  return s;
}

int chamber_element(const ReflectionGroup& g, const std::vector<Vec>& fNormals,
                    const Vec& x) {
  int best = 0;
  double bestMargin = -std::numeric_limits<double>::infinity();
  for (int gi = 0; gi < g.order(); ++gi) {
    const Vec y = g.elements[gi].transpose() * x;
    double margin = std::numeric_limits<double>::infinity();
    for (const Vec& nrm : fNormals) margin = std::min(margin, y.dot(nrm));
    if (margin > bestMargin + 1e-14) {
      bestMargin = margin;
      best = gi;
    }
  }
  return best;
}

Vec project_to_cone(const std::vector<Vec>& normals, const Vec& v) {
  if (normals.empty()) return v;
  Vec x = v;
  std::vector<Vec> corr(normals.size(), Vec::Zero(v.size()));
  for (int it = 0; it < 200; ++it) {
    double moved = 0.0;
    for (size_t i = 0; i < normals.size(); ++i) {
      const Vec y = x + corr[i];
      const double s = y.dot(normals[i]);
      Vec xNew = (s < 0.0) ? Vec(y - s * normals[i]) : y;
      corr[i] = y - xNew;
      moved += (xNew - x).norm();
      x = xNew;
    }
    if (moved <= 1e-15) break;
  }
  return x;
}

Field equivariant_project(const Field& u, const ReflectionGroup& g) {
  const Grid& gr = u.grid;
  if (gr.n != g.n) throw std::invalid_argument("equivariant_project: dimension mismatch");
  if (u.m != g.n)
    throw std::invalid_argument("equivariant_project: target dimension must match group");
  Field out = u;
  const double w = 1.0 / g.order();
  Vec acc(u.m);
  for (int i = 0; i < gr.numNodes; ++i) {
    if (!u.free_mask[i]) continue;
    const Vec x = gr.node_pos(i);
    acc.setZero();
    for (const Mat& e : g.elements) {
      acc += e.transpose() * u.interpolate(e * x);
    }
    out.values.col(i) = w * acc;
  }
  return out;
}

Field positivity_project(const Field& u, const EquivariantSetup& setup) {
  if (u.m != setup.group.n)
    throw std::invalid_argument("positivity_project: dimension mismatch");
  Field out = u;
  for (int i = 0; i < u.grid.numNodes; ++i) {
    if (!u.free_mask[i]) continue;
    const Vec x = u.grid.node_pos(i);
    const int gi = chamber_element(setup.group, setup.fNormals, x);
    const Mat& e = setup.group.elements[gi];
    const Vec v = project_to_cone(setup.fNormals, e.transpose() * u.values.col(i));
    out.values.col(i) = e * v;
  }
  return out;
}

double equivariance_residual(const Field& u, const ReflectionGroup& g, int stride) {
  double worst = 0.0;
  const Grid& gr = u.grid;
  for (int i = 0; i < gr.numNodes; i += stride) {
    if (!u.free_mask[i]) continue;
    const Vec x = gr.node_pos(i);
    for (const Mat& e : g.elements) {
      const Vec gx = e * x;
      bool inside = true;
      for (int d = 0; d < gr.n; ++d) {
        if (std::abs(gx[d]) > gr.L - 1e-12) inside = false;
      }
      if (!inside) continue;
      const double r = (u.interpolate(gx) - e * u.values.col(i)).norm();
      worst = std::max(worst, r);
    }
  }
  return worst;
}

}  // namespace ac
