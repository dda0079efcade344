#include "ac/potential.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace ac {

MinimaSet MinimaSet::create(std::vector<Vec> pts) {
  if (pts.size() < 2) throw std::invalid_argument("MinimaSet: need at least 2 minima");
  MinimaSet s;
  s.m = static_cast<int>(pts[0].size());
  for (const auto& p : pts) {
    if (p.size() != s.m) throw std::invalid_argument("MinimaSet: mixed dimensions");
  }
  s.d0 = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size(); ++j) {
      const double d = (pts[i] - pts[j]).norm();
      if (d <= 0.0) throw std::invalid_argument("MinimaSet: coincident minima");
      s.d0 = std::min(s.d0, d);
    }
  }
  s.points = std::move(pts);
  return s;
}

double MinimaSet::dist_to_nearest(const Vec& u, int* which) const {
  double best = std::numeric_limits<double>::infinity();
  int arg = -1;
  for (int k = 0; k < count(); ++k) {
    const double d = (u - points[k]).norm();
    if (d < best) {
      best = d;
      arg = k;
    }
  }
  if (which) *which = arg;
  return best;
}

bool MinimaSet::nondegenerate_simplex() const {
  if (count() != m + 1) return false;
  Mat E(m, m);
  for (int k = 1; k <= m; ++k) E.col(k - 1) = points[k] - points[0];
  return E.fullPivLu().rank() == m;
}

Potential Potential::sub_quadratic(MinimaSet minima, Vec exponents) {
  if (exponents.size() != minima.count())
    throw std::invalid_argument("Potential: one exponent per minimum required");
  for (int k = 0; k < exponents.size(); ++k) {
    // alpha >= 2 is the smooth comparison case (no free boundary); allowed
    // here so certificates can contrast it, restricted to (0,2) by the
    // continuation ladders and experiment configs where the theory needs it.
    if (!(exponents[k] > 0.0))
      throw std::invalid_argument("Potential: exponents must be positive");
  }
  Potential p;
  p.kind_ = PotentialKind::SubQuadratic;
  p.minima_ = std::move(minima);
  p.exponents_ = std::move(exponents);
  return p;
}

Potential Potential::sub_quadratic(MinimaSet minima, double alpha) {
  Vec e = Vec::Constant(minima.count(), alpha);
  return sub_quadratic(std::move(minima), std::move(e));
}

Potential Potential::characteristic(MinimaSet minima) {
  if (!minima.nondegenerate_simplex())
    throw std::invalid_argument("Potential: characteristic kind needs a nondegenerate simplex");
  Potential p;
  p.kind_ = PotentialKind::Characteristic;
  p.minima_ = std::move(minima);
  return p;
}

namespace {

// Patch coefficients: q(rho) = A rho^2 + B rho^4 with q(eps) = eps^a,
// q'(eps) = a eps^{a-1}. Nonnegative on [0, eps] for a in (0,2).
void patch_coeffs(double alpha, double eps, double& A, double& B) {
  A = 0.5 * (4.0 - alpha) * std::pow(eps, alpha - 2.0);
  B = 0.5 * (alpha - 2.0) * std::pow(eps, alpha - 4.0);
}

// Barycentric test: u in the simplex hull of the minima (within tol)?
bool in_hull(const MinimaSet& ms, const Vec& u, double tol, bool strict) {
  const int m = ms.m;
  Mat E(m, m);
  for (int k = 1; k <= m; ++k) E.col(k - 1) = ms.points[k] - ms.points[0];
  Vec lam = E.fullPivLu().solve(u - ms.points[0]);
  double sum = 0.0;
  for (int k = 0; k < m; ++k) {
    if (strict ? lam[k] <= tol : lam[k] < -tol) return false;
    sum += lam[k];
  }
  return strict ? sum < 1.0 - tol : sum <= 1.0 + tol;
}

}  // namespace

double Potential::value(Eigen::Ref<const Vec> u) const {
  if (u.size() != minima_.m) throw std::invalid_argument("Potential::value: dimension mismatch");
  if (kind_ == PotentialKind::Characteristic) {
    const Vec uu = u;
    return in_hull(minima_, uu, 1e-12, /*strict=*/true) ? 1.0 : 0.0;
  }
  double w = 1.0;
  for (int k = 0; k < minima_.count(); ++k) {
    const double rho = (u - minima_.points[k]).norm();
    const double a = exponents_[k];
    if (kind_ == PotentialKind::Regularized && rho < eps_) {
      if (rho == 0.0) return 0.0;
      double A, B;
      patch_coeffs(a, eps_, A, B);
      w *= A * rho * rho + B * rho * rho * rho * rho;
    } else {
      if (rho == 0.0) return 0.0;
      w *= std::pow(rho, a);
    }
  }
  return w;
}

void Potential::grad(Eigen::Ref<const Vec> u, Eigen::Ref<Vec> g) const {
  if (u.size() != minima_.m) throw std::invalid_argument("Potential::grad: dimension mismatch");
  if (kind_ == PotentialKind::Characteristic)
    throw std::logic_error("Potential::grad: characteristic potential has no pointwise gradient");

  const int N = minima_.count();
  const double cutoff = 1e-14;

  // Designated subgradient: zero at (numerically at) a minimum.
  // Work with per-factor values f_k and radial derivatives f_k'.
  std::vector<double> f(N), fp(N), rho(N);
  std::vector<Vec> dir(N);
  for (int k = 0; k < N; ++k) {
    Vec dk = u - minima_.points[k];
    rho[k] = dk.norm();
    if (rho[k] < cutoff) {
      g.setZero();
      return;
    }
    dir[k] = dk / rho[k];
    const double a = exponents_[k];
    if (kind_ == PotentialKind::Regularized && rho[k] < eps_) {
      double A, B;
      patch_coeffs(a, eps_, A, B);
      f[k] = A * rho[k] * rho[k] + B * std::pow(rho[k], 4);
      fp[k] = 2.0 * A * rho[k] + 4.0 * B * std::pow(rho[k], 3);
    } else {
      f[k] = std::pow(rho[k], a);
      fp[k] = a * std::pow(rho[k], a - 1.0);
    }
  }
  g.setZero();
  for (int k = 0; k < N; ++k) {
    double prod = fp[k];
    for (int j = 0; j < N; ++j)
      if (j != k) prod *= f[j];
    g += prod * dir[k];
  }
}

double eval_potential(const Potential& p, const Vec& u) { return p.value(u); }

Vec grad_potential(const Potential& p, const Vec& u) { return p.gradient(u); }

Potential regularize(const Potential& p, double eps) {
  if (p.kind() != PotentialKind::SubQuadratic)
    throw std::invalid_argument("regularize: base potential must be sub-quadratic");
  if (!(eps > 0.0 && eps < p.minima().d0 / 4.0))
    throw std::invalid_argument("regularize: need 0 < eps < d0/4");
  Potential q = p;
  q.kind_ = PotentialKind::Regularized;
  q.eps_ = eps;
  return q;
}

H1Certificate verify_h1(const Potential& p, double rho0, double cStar,
                        int nSamples, std::uint64_t seed) {
  if (p.kind() != PotentialKind::SubQuadratic)
    throw std::invalid_argument("verify_h1: sub-quadratic kind required");
  if (!(rho0 > 0.0 && rho0 < p.minima().d0 / 2.0))
    throw std::invalid_argument("verify_h1: need 0 < rho0 < d0/2");
  if (nSamples < 1) throw std::invalid_argument("verify_h1: nSamples >= 1");

  H1Certificate cert;
  cert.rho0 = rho0;
  cert.cStar = cStar;
  cert.alpha = p.exponents().minCoeff();
  if (cStar == 0.0) {
    cert.worstRatio = std::numeric_limits<double>::infinity();
    return cert;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int m = p.minima().m;
  const int nRho = 32;

  double worst = std::numeric_limits<double>::infinity();
  double worstAlpha = cert.alpha;
  for (int k = 0; k < p.minima().count(); ++k) {
    const Vec& a = p.minima().points[k];
    const double alpha = p.exponents()[k];
    for (int s = 0; s < nSamples; ++s) {
      Vec xi(m);
      do {
        for (int i = 0; i < m; ++i) xi[i] = gauss(rng);
      } while (xi.norm() < 1e-8);
      xi.normalize();
      for (int ir = 1; ir <= nRho; ++ir) {
        const double rho = rho0 * ir / nRho;
        // d/drho W(a + rho xi) = grad W . xi
        const Vec u = a + rho * xi;
        const double dW = p.gradient(u).dot(xi);
        const double bound = alpha * cStar * std::pow(rho, alpha - 1.0);
        const double ratio = dW / bound;
        if (ratio < worst) {
          worst = ratio;
          worstAlpha = alpha;
        }
      }
    }
  }
  cert.worstRatio = worst;
  cert.alpha = worstAlpha;
  return cert;
}

double characteristic_value(const MinimaSet& minima, const Vec& u, double vertexTol) {
  if (minima.dist_to_nearest(u) <= vertexTol) return 0.0;
  return in_hull(minima, u, 1e-9, /*strict=*/false) ? 1.0 : 0.0;
}

}  // namespace ac
