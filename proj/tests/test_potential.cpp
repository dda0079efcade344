#include <doctest.h>

#include <cmath>
#include <random>

#include "ac/potential.hpp"
#include "ac/symmetry.hpp"

using namespace ac;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }

MinimaSet pm1() { return MinimaSet::create({v1(-1.0), v1(1.0)}); }

}  // namespace

TEST_CASE("sub-quadratic values") {
  const Potential p = Potential::sub_quadratic(pm1(), 1.0);
  CHECK(p.value(v1(0.0)) == doctest::Approx(1.0));
  CHECK(p.value(v1(1.0)) == 0.0);
  CHECK(p.value(v1(-1.0)) == 0.0);
  CHECK(p.value(v1(0.5)) == doctest::Approx(0.75));
}

TEST_CASE("characteristic values are the open-hull indicator") {
  const Potential p = Potential::characteristic(pm1());
  CHECK(p.value(v1(0.0)) == 1.0);
  CHECK(p.value(v1(1.0)) == 0.0);
  CHECK(p.value(v1(-1.0)) == 0.0);
  CHECK(p.value(v1(2.0)) == 0.0);
  CHECK(p.value(v1(-1.5)) == 0.0);
}

TEST_CASE("gradients: symmetry point, designated subgradient, product rule") {
  const Potential smooth = Potential::sub_quadratic(pm1(), 2.0);
  CHECK(smooth.gradient(v1(0.0))[0] == doctest::Approx(0.0));

  const Potential p = Potential::sub_quadratic(pm1(), 1.0);
  CHECK(p.gradient(v1(1.0))[0] == 0.0);  // designated subgradient at the minimum
  CHECK(p.gradient(v1(0.5))[0] == doctest::Approx(-1.0));
}

TEST_CASE("gradient matches central differences away from minima") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (double alpha : {0.5, 1.0, 1.5}) {
    const Potential p = Potential::sub_quadratic(pm1(), alpha);
    int tested = 0;
    while (tested < 200) {
      const Vec u = v1(U(rng));
      if (p.minima().dist_to_nearest(u) < 0.1) continue;
      ++tested;
      const double fd = 1e-5;
      const double d = (p.value(v1(u[0] + fd)) - p.value(v1(u[0] - fd))) / (2.0 * fd);
      const double g = p.gradient(u)[0];
      CHECK(std::abs(g - d) <= 1e-6 * std::max(1.0, std::abs(d)));
    }
  }
}

TEST_CASE("characteristic potential has no gradient") {
  const Potential p = Potential::characteristic(pm1());
  Vec g(1);
  CHECK_THROWS_AS(p.grad(v1(0.3), g), std::logic_error);
}

TEST_CASE("regularize: agreement region, zero set, patch convergence") {
  const Potential p = Potential::sub_quadratic(pm1(), 1.0);
  const double eps = 0.1;
  const Potential pe = regularize(p, eps);
  CHECK(pe.value(v1(1.0 - 2.0 * eps)) == doctest::Approx(p.value(v1(1.0 - 2.0 * eps))));
  CHECK(pe.value(v1(1.0)) == 0.0);
  CHECK(pe.value(v1(-1.0)) == 0.0);

  // sup over the patch region shrinks monotonically along the ladder
  double prev = 1e30;
  for (double e : {0.1, 0.05, 0.025}) {
    const Potential q = regularize(p, e);
    double sup = 0.0;
    for (int i = 1; i < 400; ++i) {
      const double rho = e * i / 400.0;
      const double u = 1.0 - rho;
      sup = std::max(sup, std::abs(q.value(v1(u)) - p.value(v1(u))));
    }
    CHECK(sup <= prev + 1e-15);
    CHECK(sup > 0.0);
    prev = sup;
  }
  CHECK(prev < 0.05);

  CHECK_THROWS_AS(regularize(p, 0.6), std::invalid_argument);  // eps >= d0/4
}

TEST_CASE("regularize preserves group invariance") {
  const ReflectionGroup g = build_dihedral(3);
  EquivariantSetup setup = stabilizer_region(g, Vec2(1.0, 0.0));
  const MinimaSet minima = MinimaSet::create(setup.orbit);
  const Potential pe = regularize(Potential::sub_quadratic(minima, 1.0), 0.2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (int k = 0; k < 200; ++k) {
    const Vec u = Vec2(U(rng), U(rng));
    const double w = pe.value(u);
    for (const Mat& m : g.elements) CHECK(std::abs(pe.value(m * u) - w) <= 1e-12);
  }
}

TEST_CASE("eval_potential nonnegative, zero exactly on minima") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  const Potential p = Potential::sub_quadratic(pm1(), 0.7);
  const Potential pe = regularize(p, 0.1);
  for (int k = 0; k < 500; ++k) {
    const Vec u = v1(U(rng));
    CHECK(p.value(u) >= 0.0);
    CHECK(pe.value(u) >= 0.0);
  }
  for (const Vec& a : p.minima().points) {
    CHECK(p.value(a) == 0.0);
    CHECK(pe.value(a) == 0.0);
  }
}

TEST_CASE("verify_h1 certificates") {
  const Potential p = Potential::sub_quadratic(pm1(), 1.0);

  // Near a = 1 the radial derivative of W = rho(2 - rho) is 2 - 2 rho,
  // whose minimum over (0, 0.5] is 1.0: the sharp C* at rho0 = 0.5.
  const H1Certificate cPass = verify_h1(p, 0.5, 1.0, 2000);
  CHECK(cPass.passes());
  const H1Certificate cFail = verify_h1(p, 0.5, 1.5, 2000);
  CHECK_FALSE(cFail.passes());
  CHECK(cFail.worstRatio == doctest::Approx(1.0 / 1.5).epsilon(0.02));

  // cStar = 0: vacuous pass
  const H1Certificate cZero = verify_h1(p, 0.5, 0.0, 100);
  CHECK(cZero.passes());
  CHECK(cZero.worstRatio > 1e30);

  // quadratic wells with cStar above the curvature bound fail
  const Potential q = Potential::sub_quadratic(pm1(), 2.0);
  CHECK_FALSE(verify_h1(q, 0.5, 10.0, 2000).passes());
}

TEST_CASE("verify_h1 is deterministic under a fixed seed") {
  const Potential p = Potential::sub_quadratic(pm1(), 1.0);
  const H1Certificate a = verify_h1(p, 0.4, 1.0, 500, 99);
  const H1Certificate b = verify_h1(p, 0.4, 1.0, 500, 99);
  CHECK(a.worstRatio == b.worstRatio);
}

TEST_CASE("minima set validation") {
  CHECK_THROWS_AS(MinimaSet::create({v1(1.0)}), std::invalid_argument);
  CHECK_THROWS_AS(MinimaSet::create({v1(1.0), v1(1.0)}), std::invalid_argument);
  const MinimaSet m = pm1();
  CHECK(m.d0 == doctest::Approx(2.0));
  int which = -1;
  CHECK(m.dist_to_nearest(v1(0.9), &which) == doctest::Approx(0.1));
  CHECK(which == 1);
}
