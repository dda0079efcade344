#pragma once

#include <cstdint>
#include <vector>

#include "ac/types.hpp"

namespace ac {

// Finite set of global minima a_1,...,a_N of the potential.
struct MinimaSet {
  std::vector<Vec> points;
  int m = 0;        // target dimension
  double d0 = 0.0;  // min pairwise distance, cached

  static MinimaSet create(std::vector<Vec> pts);

  int count() const { return static_cast<int>(points.size()); }
  double dist_to_nearest(const Vec& u, int* which = nullptr) const;
  // N = m+1 with affinely independent vertices.
  bool nondegenerate_simplex() const;
};

// Pointwise energy density with a (sub)gradient. Minimizers descend
// through this interface so model problems can plug in their own W.
struct EnergyDensity {
  virtual ~EnergyDensity() = default;
  virtual int dim() const = 0;
  virtual double value(Eigen::Ref<const Vec> u) const = 0;
  virtual void grad(Eigen::Ref<const Vec> u, Eigen::Ref<Vec> g) const = 0;
  virtual bool differentiable() const { return true; }
};

enum class PotentialKind : std::uint8_t { SubQuadratic, Characteristic, Regularized };

struct H1Certificate {
  double rho0 = 0.0;
  double cStar = 0.0;
  double alpha = 0.0;       // worst exponent encountered
  double worstRatio = 0.0;  // min sampled (d/drho W)/(alpha C* rho^{alpha-1})
  bool passes() const { return worstRatio >= 1.0; }
};

// W(u) = prod_k |u - a_k|^{alpha_k} (sub-quadratic), its indicator
// counterpart at alpha = 0, and the C^2-regularized variant W^eps.
class Potential : public EnergyDensity {
 public:
  static Potential sub_quadratic(MinimaSet minima, Vec exponents);
  static Potential sub_quadratic(MinimaSet minima, double alpha);
  static Potential characteristic(MinimaSet minima);

  PotentialKind kind() const { return kind_; }
  const MinimaSet& minima() const { return minima_; }
  const Vec& exponents() const { return exponents_; }
  double eps() const { return eps_; }

  int dim() const override { return minima_.m; }
  double value(Eigen::Ref<const Vec> u) const override;
  void grad(Eigen::Ref<const Vec> u, Eigen::Ref<Vec> g) const override;
  bool differentiable() const override { return kind_ != PotentialKind::Characteristic; }

  Vec gradient(const Vec& u) const {
    Vec g(minima_.m);
    grad(u, g);
    return g;
  }

 private:
  PotentialKind kind_ = PotentialKind::SubQuadratic;
  MinimaSet minima_;
  Vec exponents_;
  double eps_ = 0.0;

  friend Potential regularize(const Potential& p, double eps);
};

double eval_potential(const Potential& p, const Vec& u);
Vec grad_potential(const Potential& p, const Vec& u);

// W^eps: agrees with W at dist >= eps from each minimum; inside the
// eps-ball the radial factor |u-a_k|^alpha is replaced by an even
// polynomial patch A rho^2 + B rho^4 matching value and derivative
// at rho = eps.
Potential regularize(const Potential& p, double eps);

H1Certificate verify_h1(const Potential& p, double rho0, double cStar,
                        int nSamples, std::uint64_t seed = 12345);

// Characteristic W^0 with a vertex tolerance: 0 within tol of a minimum,
// 1 inside the closed hull, 0 outside. Used to evaluate J^0 on alpha->0
// continuation limits.
double characteristic_value(const MinimaSet& minima, const Vec& u,
                            double vertexTol = 1e-6);

}  // namespace ac
