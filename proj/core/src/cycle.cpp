#include "lamg/cycle.hpp"

#include <algorithm>
#include <cmath>

#include "lamg/coarse_solver.hpp"
#include "lamg/smoothing.hpp"
#include "lamg/work.hpp"

namespace lamg {

double flat_mu(double q) { return 2.0 * q / (q + 1.0); }

int LevelCredit::take(std::size_t level, double gamma) {
  if (credit.size() <= level) credit.resize(level + 1, 0.0);
  credit[level] += gamma;
  int theta = std::max(1, static_cast<int>(std::floor(credit[level])));
  credit[level] -= theta;
  if (credit[level] < 0.0) credit[level] = 0.0;
  return theta;
}

Real recombine(const SparseLaplacian& a, std::span<const Real> b,
               std::span<const Vector> saved_x, std::span<const Vector> saved_r,
               std::span<Real> x, Real* before) {
  Vector r = residual(a, b, x);
  Real r_norm2 = 0.0;
  for (Real v : r) r_norm2 += v * v;
  if (before) *before = std::sqrt(r_norm2);

  // columns d_i = x_i - x satisfy A d_i = r - r_i, so no extra products are
  // needed beyond the one residual above
  const std::size_t cols = saved_x.size();
  std::vector<Vector> ad(cols);
  for (std::size_t i = 0; i < cols; ++i) {
    ad[i].resize(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) ad[i][k] = r[k] - saved_r[i][k];
  }

  auto dot = [](const Vector& p, const Vector& q) {
    Real s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += p[k] * q[k];
    return s;
  };

  double alpha[2] = {0.0, 0.0};
  Real g[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  Real c[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < cols; ++i) {
    c[i] = dot(r, ad[i]);
    for (std::size_t j = 0; j <= i; ++j) g[i][j] = g[j][i] = dot(ad[i], ad[j]);
  }
  if (cols == 1) {
    if (g[0][0] > 0.0) alpha[0] = c[0] / g[0][0];
  } else if (cols == 2) {
    Real det = g[0][0] * g[1][1] - g[0][1] * g[0][1];
    if (det > 1e-14 * std::max(g[0][0] * g[1][1], Real(1e-300))) {
      alpha[0] = (c[0] * g[1][1] - c[1] * g[0][1]) / det;
      alpha[1] = (c[1] * g[0][0] - c[0] * g[0][1]) / det;
    } else {
      // near-dependent columns: fall back to the better single column
      Real gain0 = g[0][0] > 0.0 ? c[0] * c[0] / g[0][0] : 0.0;
      Real gain1 = g[1][1] > 0.0 ? c[1] * c[1] / g[1][1] : 0.0;
      if (gain0 >= gain1 && g[0][0] > 0.0) {
        alpha[0] = c[0] / g[0][0];
      } else if (g[1][1] > 0.0) {
        alpha[1] = c[1] / g[1][1];
      }
    }
  }

  // A column with a tiny ||A d|| is a near-null-space direction: the optimal
  // coefficient explodes and injects smooth error the residual cannot see.
  // Bound the coefficients and keep the move only if the quadratic form
  // still descends; otherwise leave the iterate alone.
  constexpr Real kAlphaCap = 2.0;
  for (std::size_t i = 0; i < cols; ++i) {
    alpha[i] = std::clamp(alpha[i], -kAlphaCap, kAlphaCap);
  }
  Real predicted = r_norm2;
  for (std::size_t i = 0; i < cols; ++i) {
    predicted -= 2.0 * alpha[i] * c[i];
    for (std::size_t j = 0; j < cols; ++j) predicted += alpha[i] * g[i][j] * alpha[j];
  }
  if (predicted > r_norm2) {
    alpha[0] = alpha[1] = 0.0;
  }

  Real new_norm2 = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    Real rk = r[k];
    Real xk = x[k];
    Real delta = 0.0;
    for (std::size_t i = 0; i < cols; ++i) {
      rk -= alpha[i] * ad[i][k];
      delta += alpha[i] * (saved_x[i][k] - xk);
    }
    new_norm2 += rk * rk;
    x[k] = xk + delta;
  }
  work::add(static_cast<double>(cols) * static_cast<double>(r.size()));
  return std::sqrt(std::max(new_norm2, Real(0.0)));
}

namespace {

class CycleDriver {
public:
  CycleDriver(const Hierarchy& h, const CycleConfig& cfg, SolveStats& stats)
      : h_(h), cfg_(cfg), stats_(stats) {
    credits_.credit.assign(h.levels.size(), 0.0);
  }

  // One sub-cycle pass at level l for A^l x = b.
  void visit(std::size_t l, std::span<const Real> b, std::span<Real> x, int theta) {
    const Level& level = h_.levels[l];
    if (level.coarsest != CoarsestMode::None) {
      // exact (or near-exact) solve: repeating it is pointless
      level.coarsest_solver->solve(b, x);
      return;
    }
    const Level& child = h_.levels[l + 1];
    if (child.is_elimination()) {
      visit_elimination(l, b, x, theta);
    } else {
      visit_aggregation(l, b, x, theta);
    }
  }

private:
  void visit_elimination(std::size_t l, std::span<const Real> b, std::span<Real> x, int theta) {
    const Level& child = h_.levels[l + 1];
    const auto& transfer = std::get<EliminationTransfer>(child.transfer);
    // b is fixed for the duration of a visit (and, at the top level, for the
    // whole solve), so the coarsened right-hand sides are computed once
    std::vector<Vector> local_rhs;
    const std::vector<Vector>* stage_rhs = nullptr;
    Vector coarse_rhs;
    if (l == 0) {
      if (top_stage_rhs_.empty()) {
        top_coarse_rhs_ = coarsen_stages(transfer, b, top_stage_rhs_);
      }
      stage_rhs = &top_stage_rhs_;
      coarse_rhs = top_coarse_rhs_;
    } else {
      coarse_rhs = coarsen_stages(transfer, b, local_rhs);
      stage_rhs = &local_rhs;
    }
    for (int i = 0; i < theta; ++i) {
      // exact reduction: no relaxation at this level
      Vector xc(x.begin(), x.end());
      for (const auto& s : transfer.stages) {
        Vector next(static_cast<std::size_t>(s.coarse_n));
        for (Index k = 0; k < s.coarse_n; ++k) next[k] = xc[s.parent_of_coarse[k]];
        xc = std::move(next);
      }
      int theta_child = credits_.take(l + 1, child.gamma);
      visit(l + 1, coarse_rhs, xc, theta_child);
      for (std::size_t si = transfer.stages.size(); si-- > 0;) {
        xc = backsubstitute_elim(transfer.stages[si], xc, (*stage_rhs)[si]);
      }
      std::copy(xc.begin(), xc.end(), x.begin());
    }
  }

  static Vector coarsen_stages(const EliminationTransfer& transfer, std::span<const Real> b,
                               std::vector<Vector>& stage_rhs) {
    Vector rhs(b.begin(), b.end());
    for (const auto& s : transfer.stages) {
      stage_rhs.push_back(rhs);
      rhs = coarsen_rhs_elim(s, rhs);
    }
    return rhs;
  }

  void visit_aggregation(std::size_t l, std::span<const Real> b, std::span<Real> x, int theta) {
    const Level& level = h_.levels[l];
    const Level& child = h_.levels[l + 1];
    const auto& transfer = std::get<AggregationTransfer>(child.transfer);
    const bool adaptive = cfg_.correction == CorrectionMode::AdaptiveRecombination;
    const double mu = cfg_.mu;

    std::vector<Vector> saved_x, saved_r;
    for (int i = 0; i < theta; ++i) {
      for (int s = 0; s < child.nu_pre; ++s) gauss_seidel_sweep(level.op, b, x);
      Vector r = residual(level.op, b, x);
      if (adaptive) {
        saved_x.emplace_back(x.begin(), x.end());
        saved_r.push_back(r);
      }
      Vector bc = restrict_residual(transfer, r);
      if (mu != 1.0) {
        for (Real& v : bc) v *= mu;
      }
      Vector ec(static_cast<std::size_t>(child.op.n), 0.0);
      int theta_child = credits_.take(l + 1, child.gamma);
      visit(l + 1, bc, ec, theta_child);
      add_interpolated(transfer, ec, x);
      for (int s = 0; s < child.nu_post; ++s) gauss_seidel_sweep(level.op, b, x);
    }
    if (adaptive && !saved_x.empty()) {
      Real before = 0.0;
      Real after = recombine(level.op, b, saved_x, saved_r, x, &before);
      ++stats_.recombinations;
      if (before > 0.0) {
        stats_.recomb_max_growth = std::max(stats_.recomb_max_growth, after / before);
      }
    }
  }

  const Hierarchy& h_;
  const CycleConfig& cfg_;
  SolveStats& stats_;
  LevelCredit credits_;
  std::vector<Vector> top_stage_rhs_; // per-solve cache: the finest b is fixed
  Vector top_coarse_rhs_;
};

} // namespace

std::pair<Vector, SolveStats> solve(const Hierarchy& h, std::span<const Real> b,
                                    std::span<const Real> x0, const CycleConfig& cfg) {
  const SparseLaplacian& a = h.levels.front().op;
  if (static_cast<Index>(b.size()) != a.n || static_cast<Index>(x0.size()) != a.n) {
    throw DimensionMismatchError("solve: vector length does not match the finest level");
  }
  Real b_inf = 0.0;
  for (Real v : b) b_inf = std::max(b_inf, std::abs(v));
  if (std::abs(vec_sum(b)) > 1e-10 * b_inf) {
    throw IncompatibleRhsError("right-hand side sum " + std::to_string(vec_sum(b)) +
                               " is not zero");
  }

  work::Scope scope;
  SolveStats stats;
  Vector x(x0.begin(), x0.end());
  Vector r = residual(a, b, x);
  Real r0 = norm2(r);
  stats.residuals.push_back(r0);
  if (r0 == 0.0) {
    subtract_mean(x);
    stats.converged = true;
    stats.acf = 0.0;
    stats.solve_work = scope.elapsed() / static_cast<double>(a.m);
    return {std::move(x), std::move(stats)};
  }

  CycleDriver driver(h, cfg, stats);
  const Real target = r0 / cfg.target_reduction;
  for (int cycle = 1; cycle <= cfg.max_cycles; ++cycle) {
    driver.visit(0, b, x, 1);
    subtract_mean(x);
    r = residual(a, b, x);
    Real rn = norm2(r);
    stats.residuals.push_back(rn);
    stats.cycles = cycle;
    if (rn <= target) {
      stats.converged = true;
      break;
    }
    if (rn > cfg.divergence_factor * r0 || !std::isfinite(rn)) {
      stats.acf = std::pow(rn / r0, 1.0 / cycle);
      stats.solve_work = scope.elapsed() / static_cast<double>(a.m);
      throw DivergedError("solve diverged: residual grew from " + std::to_string(r0) + " to " +
                              std::to_string(rn),
                          std::move(stats));
    }
  }
  Real rp = stats.residuals.back();
  stats.acf = std::pow(rp / r0, 1.0 / static_cast<double>(stats.cycles));
  stats.solve_work = scope.elapsed() / static_cast<double>(a.m);
  return {std::move(x), std::move(stats)};
}

} // namespace lamg
