#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lamg/sparse_laplacian.hpp"
#include "lamg/types.hpp"

namespace lamg {

enum class SweepOrder { Forward, Backward };

// One in-place Gauss-Seidel sweep x_u <- (b_u - sum_v a_uv x_v) / a_uu.
// Pass b = {} for the homogeneous system A x = 0.
// Charges one MVM-equivalent at this level's size.
void gauss_seidel_sweep(const SparseLaplacian& a, std::span<const Real> b, std::span<Real> x,
                        SweepOrder order = SweepOrder::Forward);

// K relaxed test vectors sampling the smooth-error space. Each column is the
// result of `nu` forward sweeps on A x = 0 from uniform[-1,1), mean-subtracted
// afterwards.
struct TestVectorSet {
  Index n = 0;
  int count = 0;  // K
  int sweeps = 0; // nu
  std::vector<Vector> columns;

  Real value(Index u, int k) const { return columns[k][u]; }
};

TestVectorSet generate_tvs(const SparseLaplacian& a, int count, int sweeps, std::uint64_t seed);

struct RelaxProbe {
  double factor = 0.0; // measured per-sweep energy-norm reduction
  int sweeps = 0;
};

// Runs `sweeps` GS sweeps on A x = 0 from a mean-subtracted random start and
// reports the geometric-mean per-sweep reduction of ||x||_A over the trailing
// half of the sweeps (the leading half is warm-up that only measures the
// removal of rough error). Returns factor 0 when x hits exactly 0.
RelaxProbe probe_relaxation(const SparseLaplacian& a, int sweeps, std::uint64_t seed = 7);

// Relaxation is considered fast enough to solve the level outright when the
// probe factor is at or below this threshold.
inline constexpr double kFastRelaxationFactor = 0.7;
inline constexpr int kProbeSweeps = 8;

} // namespace lamg
