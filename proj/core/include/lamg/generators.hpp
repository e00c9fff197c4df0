#pragma once

#include "lamg/sparse_laplacian.hpp"
#include "lamg/types.hpp"

namespace lamg {
namespace gen {

// N x N grid graph with unit weights (the standard 5-point stencil with
// Neumann closure: out-of-grid legs dropped, diagonal closes the row sum).
SparseLaplacian grid_5pt(Index n_side);

// Fourth-order 13-point stencil: distance-1 axis weight 16, distance-2 axis
// weight -1, interior diagonal 60. Requires n_side >= 5.
SparseLaplacian grid_13pt_4th(Index n_side);

enum class CrossAlignment {
  Agnostic,  // centered cross-term over all four corners
  Northeast, // cross-term aligned with the NE and SW neighbors
};

// Rotated anisotropic operator (cos^2 a + eps sin^2 a) U_xx
// + (1 - eps) sin(2a) U_xy + (eps cos^2 a + sin^2 a) U_yy, discretized with
// 5-point second derivatives and the chosen cross-term stencil, scaled by
// 1/2 so entries are meshsize free. Produces negative edge weights.
SparseLaplacian grid_anis_rotated(Index n_side, double alpha, double eps,
                                  CrossAlignment alignment);

SparseLaplacian path(Index n);
SparseLaplacian star(Index n);            // node 0 is the center
SparseLaplacian complete(Index n);
SparseLaplacian two_hubs(Index leaves);   // centers 0 and 1 joined by an edge
SparseLaplacian grid_plus_link(Index n_side, Index u, Index v);
SparseLaplacian binary_tree(Index n);     // heap-ordered

} // namespace gen
} // namespace lamg
