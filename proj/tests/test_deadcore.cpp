#include <doctest.h>

#include <cmath>

#include "ac/deadcore.hpp"
#include "ac/field.hpp"

using namespace ac;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }

}  // namespace

TEST_CASE("torsion ball") {
  const TorsionBall tb = torsion_ball(1.0, 2, Vec::Zero(2));
  CHECK(tb.psi_max() == doctest::Approx(0.25));
  CHECK(tb.psi(Vec2(1.0, 0.0)) == doctest::Approx(0.0));
  CHECK(tb.psi(Vec2(0.0, -1.0)) == doctest::Approx(0.0));
  CHECK(tb.s(Vec2(0.6, 0.8)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(tb.s0() == doctest::Approx(std::sqrt(0.5)));

  // the 5-point Laplacian is exact on quadratics: Lap psi = -1
  const double h = 0.125;
  auto psi = [&](double x, double y) { return tb.psi(Vec2(x, y)); };
  const double lap = (psi(h, 0) + psi(-h, 0) + psi(0, h) + psi(0, -h) - 4.0 * psi(0, 0)) / (h * h);
  CHECK(lap == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("supersolution profile: closed form with dead core") {
  // p = 1/2, c = 1: d = 2 sqrt(3); at s0 = 2 sqrt(3) the core shrinks to
  // the single point s = 0 and X(s) = s^4 / 144
  const double s0 = 2.0 * std::sqrt(3.0);
  CHECK(sperb_d(0.5, 1.0) == doctest::Approx(s0));
  const SupersolutionProfile prof = supersolution_profile(0.5, 1.0, s0);
  CHECK(prof.hasDeadCore);
  CHECK(prof.deadCoreOnset == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(prof.X0 == doctest::Approx(0.0));
  // table entries are exact; eval interpolates linearly between them
  for (const auto& [s, X] : prof.samples)
    CHECK(X == doctest::Approx(std::pow(s, 4) / 144.0).epsilon(1e-10));
  for (double s : {0.5, 1.0, 2.0, 3.0})
    CHECK(prof.eval(s) == doctest::Approx(std::pow(s, 4) / 144.0).epsilon(1e-3));
  CHECK(prof.eval(s0) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("supersolution profile: shooting branch when s0 < d") {
  const SupersolutionProfile prof = supersolution_profile(0.5, 1.0, 2.0);
  CHECK_FALSE(prof.hasDeadCore);
  CHECK(prof.X0 > 0.0);
  CHECK(prof.eval(prof.s0) == doctest::Approx(1.0).epsilon(1e-6));
  // X'(0) = 0, one-sided second-order estimate (cancels the X'' term)
  const double ds = prof.samples[1].first - prof.samples[0].first;
  const double X0 = prof.samples[0].second;
  const double X1 = prof.samples[1].second;
  const double X2 = prof.samples[2].second;
  CHECK(std::abs((4.0 * X1 - 3.0 * X0 - X2) / (2.0 * ds)) <= 1e-6);

  // the samples satisfy the ODE X'' = c^2 X^p away from the endpoints
  for (size_t i = 50; i + 50 < prof.samples.size(); i += 97) {
    const auto [s, X] = prof.samples[i];
    const auto [sm, Xm] = prof.samples[i - 1];
    const auto [sp, Xp] = prof.samples[i + 1];
    const double d2X = (Xp - 2.0 * X + Xm) / ((sp - s) * (s - sm));
    CHECK(d2X == doctest::Approx(std::pow(X, 0.5)).epsilon(1e-3));
  }
}

TEST_CASE("predicted dead-core radius: both branches and continuity") {
  const DeadCoreRadius a = predicted_deadcore_radius(0.5, 1.0, 1.0, 10.0, 2);
  CHECK(a.predicted);
  CHECK(a.d == doctest::Approx(2.0 * std::sqrt(3.0)));
  CHECK(a.R0 == doctest::Approx(2.0 * std::sqrt(6.0)));

  const DeadCoreRadius b = predicted_deadcore_radius(0.5, 1.0, 1.0, 3.0, 2);
  CHECK(b.predicted);
  CHECK(b.R0 == doctest::Approx(6.0 - 2.0 * std::sqrt(6.0)));

  // continuity at the branch point R = sqrt(n) d
  const double Rb = std::sqrt(2.0) * 2.0 * std::sqrt(3.0);
  const double lo = predicted_deadcore_radius(0.5, 1.0, 1.0, Rb - 1e-9, 2).R0;
  const double hi = predicted_deadcore_radius(0.5, 1.0, 1.0, Rb + 1e-9, 2).R0;
  CHECK(std::abs(lo - hi) <= 1e-6);

  // R too small: no prediction
  CHECK_FALSE(predicted_deadcore_radius(0.5, 1.0, 1.0, 1.0, 2).predicted);

  // delta -> 0 shrinks the predicted-core complement monotonically
  double prev = 1e30;
  for (double delta : {1.0, 0.5, 0.1, 0.01, 1e-4}) {
    const DeadCoreRadius r = predicted_deadcore_radius(0.5, 1.0, delta, 10.0, 2);
    CHECK(r.predicted);
    CHECK(r.R0 < prev);
    prev = r.R0;
  }
  CHECK(prev < 0.6);  // R0 ~ delta^{(1-p)/2} -> 0
}

TEST_CASE("detect_deadcore: constant field, sine profile, empty report") {
  const MinimaSet minima = MinimaSet::create({v1(-1.0), v1(1.0)});

  // whole-ball core
  const Grid g2 = Grid::make(2, 0.1, 2.0, 2.0);
  Field c = make_field(g2, 1);
  set_constant(c, v1(1.0));
  const DeadCoreReport whole = detect_deadcore(c, minima, 1e-6);
  REQUIRE(whole.perMinimum.size() == 2);
  CHECK(whole.perMinimum[1].coreInradius == doctest::Approx(2.0 - 0.1));
  CHECK(whole.perMinimum[0].coreCellCount == 0);

  // clipped sine: cores start at |x| = pi / (2 sqrt(2))
  const double h = 1e-3, L = 5.0;
  const Grid g1 = Grid::make(1, h, L);
  const double xc = M_PI / (2.0 * std::sqrt(2.0));
  Field u = init_custom(g1, 1, [&](const Vec& x) {
    return v1(std::sin(std::sqrt(2.0) * std::clamp(x[0], -xc, xc)));
  });
  const DeadCoreReport rep = detect_deadcore(u, minima, 1e-9);
  const long expected = std::lround((L - xc) / h);
  CHECK(std::abs(rep.perMinimum[1].coreCellCount - expected) <= 2);
  CHECK(std::abs(rep.perMinimum[0].coreCellCount - expected) <= 2);

  // no cells near any minimum
  Field far = make_field(g2, 1);
  set_constant(far, v1(0.2));
  for (const auto& e : detect_deadcore(far, minima, 1e-3).perMinimum) {
    CHECK(e.coreCellCount == 0);
    CHECK(e.coreInradius == 0.0);
  }
}

TEST_CASE("verify_supersolution is small and second-order in h") {
  const double v1h = verify_supersolution(0.5, 1.0, 10.0, 2, 0.04);
  CHECK(v1h <= 1e-2);
  const double v2h = verify_supersolution(0.5, 1.0, 10.0, 2, 0.02);
  CHECK(v2h > 0.0);
  CHECK(v1h / v2h >= 3.0);
}

TEST_CASE("hat_c constant: value at alpha=1 and endpoint blow-up") {
  const double c1 = hat_c_constant(1.0, 2, 1.0, 1.0, 1.0, 1.0);
  CHECK(c1 == doctest::Approx(8.0 + std::sqrt(6.0)).epsilon(1e-10));
  CHECK(std::abs(c1 - 10.449) <= 1e-3);

  // finite on all samples; the extreme samples already exceed the
  // alpha = 1 value (both limits blow up), the inner ones need not
  for (double a : {0.05, 0.1, 1.9, 1.95}) CHECK(std::isfinite(hat_c_constant(a, 2, 1.0, 1.0, 1.0, 1.0)));
  CHECK(hat_c_constant(0.05, 2, 1.0, 1.0, 1.0, 1.0) >= c1);
  CHECK(hat_c_constant(1.95, 2, 1.0, 1.0, 1.0, 1.0) >= c1);
  // monotone on the sampled tails
  CHECK(hat_c_constant(0.05, 2, 1.0, 1.0, 1.0, 1.0) > hat_c_constant(0.1, 2, 1.0, 1.0, 1.0, 1.0));
  CHECK(hat_c_constant(1.95, 2, 1.0, 1.0, 1.0, 1.0) > hat_c_constant(1.9, 2, 1.0, 1.0, 1.0, 1.0));

  CHECK_THROWS_AS(hat_c_constant(0.0, 2, 1.0, 1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(hat_c_constant(2.0, 2, 1.0, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("scalar model density: values and gradient consistency") {
  DeadCoreModelDensity dens;
  dens.c = 1.0;
  dens.alpha = 1.0;  // p = 1/2
  CHECK(dens.value(v1(0.0)) == 0.0);
  CHECK(dens.value(v1(1.0)) == doctest::Approx(2.0 / 3.0));
  Vec g(1);
  dens.grad(v1(0.25), g);
  CHECK(g[0] == doctest::Approx(0.5));  // sqrt(0.25)
  dens.grad(v1(-0.25), g);
  CHECK(g[0] == doctest::Approx(-0.5));
  const double fd = (dens.value(v1(0.3 + 1e-6)) - dens.value(v1(0.3 - 1e-6))) / 2e-6;
  dens.grad(v1(0.3), g);
  CHECK(g[0] == doctest::Approx(fd).epsilon(1e-6));
}
