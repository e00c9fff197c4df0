#pragma once

#include <span>
#include <vector>

#include "lamg/smoothing.hpp"
#include "lamg/sparse_laplacian.hpp"
#include "lamg/types.hpp"

namespace lamg {

// Affinity c_uv = 1 - |(X_u,X_v)|^2 / ((X_u,X_u)(X_v,X_v)) per graph edge,
// where X_u is the row of test-vector values at node u. Values are stored
// aligned with the CSR entry array of the matrix they were computed for.
struct AffinityView {
  std::vector<Real> edge_affinity; // parallel to SparseLaplacian::col
  std::vector<Real> node_norm;     // (X_u, X_u)
  std::vector<Index> degenerate;   // nodes with identically zero TV rows
};

AffinityView compute_affinities(const SparseLaplacian& a, const TestVectorSet& tvs);

// Locally high-degree nodes: |E_u| >= 8 * sum_v |w_uv| |E_v| / sum_v |w_uv|.
std::vector<Index> detect_hubs(const SparseLaplacian& a);

// Energy ratio for aggregating u with seed s: per test vector, the nodal
// energy minimum over the value at u divided by the nodal energy with the
// value at u replaced by the value at s; the worst vector counts. Returns
// +infinity when some denominator is <= 0.
Real energy_ratio_qus(const SparseLaplacian& a, const TestVectorSet& tvs, Index u, Index s);

inline constexpr Real kEnergyRatioThreshold = 2.5;
inline constexpr Real kTinyEdgeFraction = 1e-3;
inline constexpr int kMaxAggregationStages = 2;

struct AggregationTransfer {
  Index fine_n = 0;
  Index coarse_n = 0;
  std::vector<Index> aggregate_of;  // fine node -> aggregate (caliber-1 P)
  std::vector<Index> seed_of;       // aggregate -> its seed fine node (-1 for dummy)
  int stage_used = 0;
  double alpha = 1.0;               // coarse_n / fine_n
  Index dummy_aggregate = -1;
};

// Staged seed/associate aggregation. Processes undecided nodes in ascending
// order of their minimal neighbor affinity; each aggregates with the
// non-associate neighbor of smallest affinity whose energy ratio passes the
// threshold. Up to two nested stages; the stage whose coarsening ratio is
// closest to 0.7 / gamma wins. Nodes whose incident edges are all tiny
// relative to their endpoints' strongest edges share a single dummy
// aggregate.
AggregationTransfer aggregate(const SparseLaplacian& a, const TestVectorSet& tvs, double gamma,
                              std::span<const Index> hubs);

// A^c = P^T A P for the caliber-1 P encoded by the partition: coarse edge
// weights sum the fine weights between aggregates, diagonal closes row sums.
SparseLaplacian galerkin_coarse_operator(const SparseLaplacian& a,
                                         const AggregationTransfer& t);

// (T x)_U = mean of x over aggregate U.
Vector aggregate_type(const AggregationTransfer& t, std::span<const Real> x);

// Correction interpolation x += P e_c (unit weights) and restriction
// r_c = P^T r.
void add_interpolated(const AggregationTransfer& t, std::span<const Real> coarse,
                      std::span<Real> fine);
Vector restrict_residual(const AggregationTransfer& t, std::span<const Real> fine);

} // namespace lamg
