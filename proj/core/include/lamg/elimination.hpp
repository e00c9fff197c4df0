#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lamg/sparse_laplacian.hpp"
#include "lamg/types.hpp"

namespace lamg {

// One exact reduction round. F is an independent set of low-degree nodes, so
// A_FF is diagonal and the Schur complement A_CC - A_CF A_FF^{-1} A_FC is
// computed edge-locally. Stored rows of A_FC drive right-hand-side coarsening
// and back-substitution.
struct ElimStage {
  Index parent_n = 0;
  Index coarse_n = 0;
  std::vector<Index> f_nodes;             // parent indices, selection order
  std::vector<Real> f_diag;               // a_ff
  std::vector<EntryCount> f_ptr;          // CSR over f_nodes into C neighbors
  std::vector<Index> f_nbr;               // parent index of each C neighbor
  std::vector<Real> f_val;                // entries a_fv
  std::vector<Index> coarse_of_parent;    // -1 for eliminated nodes
  std::vector<Index> parent_of_coarse;
};

struct EliminationTransfer {
  std::vector<ElimStage> stages;
  SparseLaplacian coarse_op;
};

inline constexpr Index kMaxEliminationDegree = 4;
// Rounds stop once the selected set falls below this fraction of the nodes.
inline constexpr double kMinEliminationFraction = 0.01;

// Greedy sweep in ascending index order: each still-eligible node of degree
// <= max_degree joins F and marks its neighbors ineligible. Degree-0 nodes
// are never selected (they are trivial components, handled elsewhere).
void select_low_degree_set(const SparseLaplacian& a, Index max_degree, std::vector<Index>& f,
                           std::vector<Index>& c);

// Schur-complement reduction for an independent F with positive diagonals.
std::pair<SparseLaplacian, ElimStage> schur_reduce(const SparseLaplacian& a,
                                                   std::span<const Index> f,
                                                   std::span<const Index> c);

// Repeats select+reduce while |F| >= kMinEliminationFraction * n. Returns
// nullopt when the first round already selects too few nodes.
std::optional<EliminationTransfer> eliminate_rounds(const SparseLaplacian& a);

// b_c = b_C - A_CF A_FF^{-1} b_F, applied stage by stage.
Vector coarsen_rhs_elim(const EliminationTransfer& t, std::span<const Real> b);
Vector coarsen_rhs_elim(const ElimStage& s, std::span<const Real> b);

// Restriction of an iterate to the retained nodes (initial coarse guess).
Vector restrict_elim(const EliminationTransfer& t, std::span<const Real> x);

// x_C = x_c and x_f = (b_f - sum_v a_fv x_v) / a_ff, stages in reverse order.
Vector backsubstitute_elim(const EliminationTransfer& t, std::span<const Real> x_c,
                           std::span<const Real> b);
Vector backsubstitute_elim(const ElimStage& s, std::span<const Real> x_c, std::span<const Real> b);

} // namespace lamg
