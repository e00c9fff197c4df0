#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lamg/errors.hpp"
#include "lamg/hierarchy.hpp"
#include "lamg/types.hpp"

namespace lamg {

enum class CorrectionMode {
  // Coarse right-hand side scaled by a fixed mu (4/3 for the target energy
  // ratio 2). The default.
  Flat,
  // Flat scaling plus iterate recombination: iterates saved after each
  // pre-relaxation are recombined by a residual-minimizing least squares
  // after the post-sweeps. Accelerates regular problems; can stall on
  // operators whose smooth errors are nearly residual-invisible.
  AdaptiveRecombination,
};

// mu minimizing the worst-case smooth-error convergence factor over energy
// ratios in [1, Q]: 2Q / (Q + 1).
double flat_mu(double q);

struct CycleConfig {
  double gamma = 1.5;
  CorrectionMode correction = CorrectionMode::Flat;
  double mu = 4.0 / 3.0;
  int max_cycles = 300;
  double target_reduction = 1e10; // stop once ||r|| drops by this factor
  double divergence_factor = 1e3; // abort once ||r|| grows by this factor
  std::uint64_t rng_seed = 1;
};

struct SolveStats {
  std::vector<double> residuals; // l2 norms r_0..r_p
  double acf = 0.0;              // (r_p / r_0)^(1/p)
  double solve_work = 0.0;       // finest-MVM equivalents
  int cycles = 0;
  bool converged = false;
  std::int64_t recombinations = 0;
  double recomb_max_growth = 0.0; // max ||r_after|| / ||r_before|| observed
};

// Raised when the residual grows by cfg.divergence_factor; carries the
// partial statistics.
struct DivergedError : Error {
  SolveStats stats;
  DivergedError(const std::string& what, SolveStats s) : Error(what), stats(std::move(s)) {}
};

// Multigrid solve of A x = b over a prepared hierarchy for a connected graph.
// b must have zero sum within 1e-10 * ||b||_inf; the returned iterate has
// zero mean. x0 supplies the initial guess.
std::pair<Vector, SolveStats> solve(const Hierarchy& h, std::span<const Real> b,
                                    std::span<const Real> x0, const CycleConfig& cfg = {});

// Residual-minimizing recombination y = x + sum_i alpha_i (x_i - x) over
// iterates saved with their residuals; never increases the l2 residual.
// Returns ||b - A y|| (and the pre-recombination norm via *before).
Real recombine(const SparseLaplacian& a, std::span<const Real> b,
               std::span<const Vector> saved_x, std::span<const Vector> saved_r,
               std::span<Real> x, Real* before = nullptr);

// Per-level fractional-cycle credit accumulators (persist across the cycles
// of one solve call): each coarse-visit request adds gamma^l, performs
// max(1, floor(credit)) sub-cycles and subtracts them.
struct LevelCredit {
  std::vector<double> credit;
  int take(std::size_t level, double gamma);
};

} // namespace lamg
