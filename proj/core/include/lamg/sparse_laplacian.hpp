#pragma once

#include <span>
#include <string>
#include <vector>

#include "lamg/edge_list.hpp"
#include "lamg/types.hpp"

namespace lamg {

// Symmetric graph Laplacian in CSR form. Both triangles of the off-diagonal
// part are stored so row scans see the full neighborhood of a node.
// Invariants kept by every constructor path:
//   - val[k] holds the matrix entry a_uv = -w_uv (weights may be negative)
//   - col indices are strictly increasing within each row, no self entries
//   - a_uv == a_vu exactly, and diag closes every row sum to zero
struct SparseLaplacian {
  Index n = 0;
  EntryCount m = 0; // number of undirected edges (stored entries = 2m)
  std::vector<EntryCount> row_ptr;
  std::vector<Index> col;
  std::vector<Real> val;
  std::vector<Real> diag;

  Index degree(Index u) const {
    return static_cast<Index>(row_ptr[u + 1] - row_ptr[u]);
  }
  std::span<const Index> neighbors(Index u) const {
    return {col.data() + row_ptr[u], static_cast<std::size_t>(degree(u))};
  }
  std::span<const Real> offdiag(Index u) const {
    return {val.data() + row_ptr[u], static_cast<std::size_t>(degree(u))};
  }
  Real max_diag() const;

  // Weight of edge (u,v), i.e. -a_uv, or 0 if not present. Binary search.
  Real weight(Index u, Index v) const;
};

enum class WeightPolicy {
  Keep,
  // If any w_uv < -1e-5 * sum_v' |w_uv'| for its row, replace every weight
  // by its absolute value before assembly.
  AbsoluteIfLargeNegative,
};

SparseLaplacian assemble_laplacian(const EdgeList& edges,
                                   WeightPolicy policy = WeightPolicy::Keep,
                                   std::vector<std::string>* warnings = nullptr);

// Assemble directly from a canonical (u<v, merged) edge list; skips the
// canonicalization pass.
SparseLaplacian assemble_canonical(Index n, std::span<const WeightedEdge> edges);

EdgeList to_edge_list(const SparseLaplacian& a);

// y = A x; charges m edge units to the work counter.
void mvm(const SparseLaplacian& a, std::span<const Real> x, std::span<Real> y);
Vector mvm(const SparseLaplacian& a, const Vector& x);

// r = b - A x; charges one MVM.
Vector residual(const SparseLaplacian& a, std::span<const Real> b, std::span<const Real> x);

// x^T A x evaluated as sum_{(u,v) in E} w_uv (x_u - x_v)^2.
Real energy(const SparseLaplacian& a, std::span<const Real> x);

// Throws InvalidLaplacianError unless symmetry holds exactly and every row
// sum is within 1e-10 * max diag of zero.
void validate_laplacian(const SparseLaplacian& a);

Real norm2(std::span<const Real> x);
Real vec_sum(std::span<const Real> x);
void subtract_mean(std::span<Real> x);

} // namespace lamg
