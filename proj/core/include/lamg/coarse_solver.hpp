#pragma once

#include <memory>
#include <span>

#include "lamg/sparse_laplacian.hpp"
#include "lamg/types.hpp"

namespace lamg {

// Coarsest-level solver. Direct mode factors the bordered system
// [[A, 1], [1^T, 0]] once per connected component and back-substitutes per
// visit, returning the zero-mean solution. Relaxation mode (for levels where
// plain Gauss-Seidel already converges fast) sweeps until the residual drops
// by 1e-12.
class CoarsestSolver {
public:
  static std::shared_ptr<const CoarsestSolver> make_direct(const SparseLaplacian& a);
  static std::shared_ptr<const CoarsestSolver> make_relaxation(const SparseLaplacian& a);

  virtual ~CoarsestSolver() = default;
  virtual void solve(std::span<const Real> b, std::span<Real> x) const = 0;
};

} // namespace lamg
