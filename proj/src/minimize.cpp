#include "ac/minimize.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <stdexcept>

#include "ac/diagnostics.hpp"

namespace ac {

void MinimizeConfig::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("MinimizeConfig: tau > 0 required");
  if (!(tolGrad > 0.0)) throw std::invalid_argument("MinimizeConfig: tolGrad > 0 required");
  if (maxIters < 0) throw std::invalid_argument("MinimizeConfig: maxIters >= 0");
  auto check_ladder = [](const std::vector<double>& lad, const char* name) {
    for (size_t i = 0; i < lad.size(); ++i) {
      if (!(lad[i] > 0.0)) throw std::invalid_argument(std::string(name) + ": entries must be positive");
      if (i > 0 && !(lad[i] < lad[i - 1]))
        throw std::invalid_argument(std::string(name) + ": must be strictly decreasing");
    }
  };
  check_ladder(epsLadder, "epsLadder");
  check_ladder(alphaLadder, "alphaLadder");
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct DescentWorkspace {
  std::vector<int> slot;      // node -> free slot or -1
  std::vector<int> freeNode;  // slot -> node
  SpMat Kff;                  // Dirichlet-energy Hessian on free dofs
  double hn = 1.0;
  Eigen::SimplicialLDLT<SpMat> fact;
  double factTau = -1.0;

  void build(const Field& u) {
    const Grid& g = u.grid;
    hn = std::pow(g.h, g.n);
    slot.assign(g.numNodes, -1);
    freeNode.clear();
    for (int i = 0; i < g.numNodes; ++i) {
      if (u.free_mask[i]) {
        slot[i] = static_cast<int>(freeNode.size());
        freeNode.push_back(i);
      }
    }
    const double w = 1.0 / (g.h * g.h);
    std::vector<Eigen::Triplet<double>> trip;
    detail::for_each_cell(g, g.ballR, nullptr, [&](int c, const std::array<int, 2>& nb) {
      for (int d = 0; d < g.n; ++d) {
        const int a = c, b = nb[d];
        const int sa = slot[a], sb = slot[b];
        if (sa >= 0) trip.emplace_back(sa, sa, w);
        if (sb >= 0) trip.emplace_back(sb, sb, w);
        if (sa >= 0 && sb >= 0) {
          trip.emplace_back(sa, sb, -w);
          trip.emplace_back(sb, sa, -w);
        }
      }
    });
    const int nf = static_cast<int>(freeNode.size());
    Kff.resize(nf, nf);
    Kff.setFromTriplets(trip.begin(), trip.end());
  }

  void ensure_factorized(double tau) {
    if (factTau == tau) return;
    SpMat A(Kff.rows(), Kff.cols());
    A.setIdentity();
    A += tau * Kff;
    fact.compute(A);
    if (fact.info() != Eigen::Success)
      throw std::runtime_error("minimize: preconditioner factorization failed");
    factTau = tau;
  }
};

void apply_constraints(Field& u, const MinimizeConfig& cfg, const EquivariantSetup* setup,
                       const MinimaSet* hull) {
  if (cfg.equivariant && setup) u = equivariant_project(u, setup->group);
  if (cfg.positivity && setup) u = positivity_project(u, *setup);
  if (cfg.clampToHull && hull) {
    for (int i = 0; i < u.grid.numNodes; ++i) {
      if (!u.free_mask[i]) continue;
      u.values.col(i) = project_to_hull(*hull, u.values.col(i));
    }
  }
}

double max_fv_norm(const Mat& fv, const std::vector<int>& freeNode) {
  double worst = 0.0;
  for (int i : freeNode) worst = std::max(worst, fv.col(i).norm());
  return worst;
}

// One continuation rung: descend `active` from u in place.
LadderRung descend_rung(Field& u, const EnergyDensity& active, const MinimizeConfig& cfg,
                        const EquivariantSetup* setup, const MinimaSet* hull,
                        double rungParam, std::vector<double>& history,
                        DescentWorkspace& ws) {
  LadderRung rung;
  rung.param = rungParam;

  apply_constraints(u, cfg, setup, hull);
  double J = total_energy(u, active).total;
  history.push_back(J);
  double tau = cfg.tau;

  int it = 0;
  for (; it < cfg.maxIters; ++it) {
    Mat fv = first_variation(u, active);
    const double res = max_fv_norm(fv, ws.freeNode);
    if (res <= cfg.tolGrad) {
      rung.stopReason = "tolGrad";
      break;
    }

    bool accepted = false;
    double stepNorm = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      Field trial = u;
      if (cfg.preconditioned) {
        ws.ensure_factorized(tau);
        Mat rhs(ws.Kff.rows(), u.m);
        for (size_t s = 0; s < ws.freeNode.size(); ++s)
          rhs.row(s) = -tau * fv.col(ws.freeNode[s]).transpose();
        Mat delta = ws.fact.solve(rhs);
        for (size_t s = 0; s < ws.freeNode.size(); ++s)
          trial.values.col(ws.freeNode[s]) += delta.row(s).transpose();
      } else {
        for (int i : ws.freeNode) trial.values.col(i) -= tau * fv.col(i);
      }
      apply_constraints(trial, cfg, setup, hull);
      const double Jnew = total_energy(trial, active).total;
      if (!std::isfinite(Jnew) || !trial.values.allFinite())
        throw std::runtime_error("minimize: divergence (non-finite field)");

      double diff2 = 0.0;
      for (int i : ws.freeNode) diff2 += (trial.values.col(i) - u.values.col(i)).squaredNorm();
      const double decreaseNeeded = cfg.c1 / tau * diff2 * ws.hn;
      const double slack = 1e-12 * std::max(1.0, std::abs(J));
      const bool ok = (cfg.stepRule == StepRule::Fixed)
                          ? (Jnew <= J + slack)
                          : (Jnew <= J - decreaseNeeded + slack);
      if (ok) {
        u = std::move(trial);
        J = Jnew;
        stepNorm = std::sqrt(diff2);
        accepted = true;
        break;
      }
      if (cfg.stepRule == StepRule::Fixed)
        throw std::runtime_error("minimize: energy increase under fixed step rule");
      tau *= cfg.beta;
      if (tau < 1e-14) break;
    }
    if (!accepted) {
      // No descent direction at floating precision: numerically stationary.
      rung.stopReason = "step-underflow";
      break;
    }
    history.push_back(J);

    const bool constrained = cfg.positivity || cfg.clampToHull || cfg.equivariant;
    if (constrained && stepNorm / tau * std::sqrt(ws.hn) <= cfg.tolGrad) {
      rung.stopReason = "projected-stationary";
      ++it;
      break;
    }
    if (cfg.stepRule == StepRule::Backtracking && (it + 1) % 25 == 0 && tau < cfg.tau)
      tau = std::min(tau * 2.0, cfg.tau);
  }
  if (rung.stopReason.empty()) rung.stopReason = "maxIters";
  rung.iterations = it;
  rung.finalEnergy = J;
  return rung;
}

}  // namespace

MinimizeResult minimize_density(const Field& u0, const EnergyDensity& p,
                                const MinimizeConfig& cfg, const EquivariantSetup* setup,
                                const EnergyDensity* reportDensity) {
  cfg.validate();
  if ((cfg.equivariant || cfg.positivity) && !setup)
    throw std::invalid_argument("minimize: constraints requested without a setup");
  if (!p.differentiable())
    throw std::invalid_argument("minimize: potential has no gradient (alpha=0 is continuation-only)");

  MinimizeResult res;
  res.field = u0;
  DescentWorkspace ws;
  ws.build(res.field);
  LadderRung rung = descend_rung(res.field, p, cfg, setup, nullptr, 0.0,
                                 res.energyHistory, ws);
  res.ladderRecord.push_back(rung);
  res.converged = rung.stopReason != "maxIters";
  res.reason = rung.stopReason;
  res.finalEnergy = total_energy(res.field, reportDensity ? *reportDensity : p);
  return res;
}

MinimizeResult minimize(const Field& u0, const Potential& p, const MinimizeConfig& cfg,
                        const EquivariantSetup* setup) {
  cfg.validate();
  if ((cfg.equivariant || cfg.positivity) && !setup)
    throw std::invalid_argument("minimize: constraints requested without a setup");
  if (p.kind() == PotentialKind::Characteristic)
    throw std::invalid_argument("minimize: alpha=0 is reached only via continuation_alpha");

  MinimizeResult res;
  res.field = u0;
  DescentWorkspace ws;
  ws.build(res.field);
  const MinimaSet* hull = cfg.clampToHull ? &p.minima() : nullptr;

  if (cfg.epsLadder.empty()) {
    LadderRung rung = descend_rung(res.field, p, cfg, setup, hull,
                                   p.kind() == PotentialKind::Regularized ? p.eps() : 0.0,
                                   res.energyHistory, ws);
    res.ladderRecord.push_back(rung);
    res.converged = rung.stopReason != "maxIters";
    res.reason = rung.stopReason;
  } else {
    if (p.kind() != PotentialKind::SubQuadratic)
      throw std::invalid_argument("minimize: eps ladder requires a sub-quadratic base");
    for (double eps : cfg.epsLadder) {
      const Potential peps = regularize(p, eps);
      LadderRung rung = descend_rung(res.field, peps, cfg, setup, hull, eps,
                                     res.energyHistory, ws);
      res.ladderRecord.push_back(rung);
      res.converged = rung.stopReason != "maxIters";
      res.reason = rung.stopReason;
    }
  }
  res.finalEnergy = total_energy(res.field, p);
  return res;
}

namespace {

// J^0 evaluation density: characteristic potential with vertex tolerance.
struct CharacteristicDensity final : EnergyDensity {
  const MinimaSet* minima;
  double vertexTol;
  int dim() const override { return minima->m; }
  double value(Eigen::Ref<const Vec> u) const override {
    return characteristic_value(*minima, u, vertexTol);
  }
  void grad(Eigen::Ref<const Vec>, Eigen::Ref<Vec>) const override {
    throw std::logic_error("characteristic potential has no gradient");
  }
  bool differentiable() const override { return false; }
};

}  // namespace

std::pair<std::vector<ContinuationStep>, ContinuationSummary> continuation_alpha(
    const Field& u0, const MinimaSet& minima, const MinimizeConfig& cfg,
    const EquivariantSetup* setup) {
  cfg.validate();
  if (!minima.nondegenerate_simplex())
    throw std::invalid_argument("continuation_alpha: need a nondegenerate simplex (N = m+1)");
  if (cfg.alphaLadder.empty())
    throw std::invalid_argument("continuation_alpha: empty alpha ladder");
  for (double a : cfg.alphaLadder) {
    if (!(a > 0.0 && a < 2.0))
      throw std::invalid_argument("continuation_alpha: alpha ladder must lie in (0,2)");
  }

  std::vector<ContinuationStep> steps;
  ContinuationSummary summary;
  Field u = u0;
  for (double alpha : cfg.alphaLadder) {
    const Potential pa = Potential::sub_quadratic(minima, alpha);
    MinimizeConfig rcfg = cfg;
    rcfg.alphaLadder.clear();
    MinimizeResult r = minimize(u, pa, rcfg, setup);
    u = r.field;
    summary.alphaEnergy.emplace_back(alpha, r.finalEnergy.total);
    steps.push_back({alpha, std::move(r)});
  }
  CharacteristicDensity c0;
  c0.minima = &minima;
  c0.vertexTol = 1e-6;
  summary.j0OnFinal = total_energy(u, c0).total;
  return {std::move(steps), std::move(summary)};
}

std::vector<RadiusSweepEntry> radius_sweep(const Potential& p, const EquivariantSetup& setup,
                                           const std::vector<double>& radii, double h,
                                           const MinimizeConfig& cfg) {
  cfg.validate();
  for (size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1]))
      throw std::invalid_argument("radius_sweep: radii must be increasing");
  }
  std::vector<RadiusSweepEntry> out;
  for (double R : radii) {
    const Grid g = Grid::make(setup.group.n, h, R, R);
    Field u0 = init_affine_competitor(g, setup, BCKind::Dirichlet);
    RadiusSweepEntry e;
    e.R = R;
    e.result = minimize(u0, p, cfg, &setup);
    e.energy = e.result.finalEnergy;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace ac
