#pragma once

#include <vector>

#include "ac/types.hpp"

namespace ac {

struct Field;

// Finite orthogonal group closed under products, with its reflections
// gamma = I - 2 n n^T singled out.
struct ReflectionGroup {
  int n = 0;
  std::vector<Mat> elements;  // contains identity, closed under product
  std::vector<Mat> reflections;
  std::vector<Vec> reflectionNormals;  // unit normals, one per reflection

  int order() const { return static_cast<int>(elements.size()); }
  void validate(double tol = 1e-10) const;
};

ReflectionGroup build_dihedral(int k);
ReflectionGroup build_coordinate(int n);
ReflectionGroup build_group_from_matrices(const std::vector<Mat>& mats);

// Oriented unit normals with F = {x : x.n_i > 0 for all i}. The chamber
// containing a supplied generic base point; both shipped constructors
// pick the standard one.
std::vector<Vec> fundamental_region(const ReflectionGroup& g);

struct EquivariantSetup {
  ReflectionGroup group;
  std::vector<Vec> fNormals;  // fundamental region half-space normals
  Vec a1;                     // distinguished minimum, a1 in closure(F)
  std::vector<Mat> stabilizer;
  std::vector<Vec> dNormals;  // D = Int(union of stabilizer copies of closure(F))
  std::vector<Vec> orbit;     // orbit of a1 (the minima set), a1 first

  bool in_F_closure(const Vec& x, double tol = 1e-12) const;
  bool in_D(const Vec& x, double tol = 1e-12) const;
  // dist(x, boundary of D) for x in D (cone of half-spaces); <= 0 outside.
  double dist_to_dD(const Vec& x) const;
};

EquivariantSetup stabilizer_region(const ReflectionGroup& g, const Vec& a1);

// Index of the group element g maximizing min_i (g^{-1}x . n_i), i.e. the
// chamber copy of x. Ties broken by element order (deterministic).
int chamber_element(const ReflectionGroup& g, const std::vector<Vec>& fNormals,
                    const Vec& x);

// Closest point of closure(F) = {x.n_i >= 0} (convex cone projection).
Vec project_to_cone(const std::vector<Vec>& normals, const Vec& v);

// u |-> (1/|G|) sum_g g^{-1} u(g x), off-grid samples by multilinear
// interpolation. Grid must be an origin-centered box.
Field equivariant_project(const Field& u, const ReflectionGroup& g);

// Pointwise: value at x replaced by g proj_clF(g^{-1} u(x)) with g the
// chamber element of x; equals plain convex projection for x in clF.
Field positivity_project(const Field& u, const EquivariantSetup& setup);

// max over sampled grid points and group elements of |u(gx) - g u(x)|.
double equivariance_residual(const Field& u, const ReflectionGroup& g,
                             int stride = 1);

}  // namespace ac
