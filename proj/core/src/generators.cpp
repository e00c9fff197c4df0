#include "lamg/generators.hpp"

#include <cmath>

#include "lamg/errors.hpp"

namespace lamg {
namespace gen {

namespace {

struct StencilLeg {
  Index dx;
  Index dy;
  Real weight; // edge weight (negated matrix entry)
};

// Grid assembly from half-space stencil legs; node (i,j) -> i * N + j.
SparseLaplacian from_stencil(Index n_side, std::span<const StencilLeg> legs) {
  EdgeList list;
  list.n = n_side * n_side;
  for (Index i = 0; i < n_side; ++i) {
    for (Index j = 0; j < n_side; ++j) {
      for (const auto& leg : legs) {
        Index ii = i + leg.dx;
        Index jj = j + leg.dy;
        if (ii < 0 || jj < 0 || ii >= n_side || jj >= n_side) continue;
        list.edges.push_back({i * n_side + j, ii * n_side + jj, leg.weight});
      }
    }
  }
  return assemble_laplacian(list);
}

} // namespace

SparseLaplacian grid_5pt(Index n_side) {
  if (n_side < 2) throw Error("grid_5pt: need n_side >= 2");
  const StencilLeg legs[] = {{1, 0, 1.0}, {0, 1, 1.0}};
  return from_stencil(n_side, legs);
}

SparseLaplacian grid_13pt_4th(Index n_side) {
  if (n_side < 5) throw Error("grid_13pt_4th: stencil does not fit, need n_side >= 5");
  const StencilLeg legs[] = {{1, 0, 16.0}, {0, 1, 16.0}, {2, 0, -1.0}, {0, 2, -1.0}};
  return from_stencil(n_side, legs);
}

SparseLaplacian grid_anis_rotated(Index n_side, double alpha, double eps,
                                  CrossAlignment alignment) {
  if (n_side < 2) throw Error("grid_anis_rotated: need n_side >= 2");
  const double cx = std::cos(alpha) * std::cos(alpha) + eps * std::sin(alpha) * std::sin(alpha);
  const double cy = eps * std::cos(alpha) * std::cos(alpha) + std::sin(alpha) * std::sin(alpha);
  const double cxy = (1.0 - eps) * std::sin(2.0 * alpha);
  const double scale = 0.5;

  // half-space legs only; the symmetric mirrors are implied
  std::vector<StencilLeg> legs;
  if (alignment == CrossAlignment::Agnostic) {
    legs.push_back({1, 0, scale * cx});
    legs.push_back({0, 1, scale * cy});
    // centered cross term: weights +cxy/4 on the (1,1) diagonal pair and
    // -cxy/4 on the (1,-1) pair
    legs.push_back({1, 1, scale * (cxy / 4.0)});
    legs.push_back({1, -1, scale * (-cxy / 4.0)});
  } else {
    // cross term folded onto the (1,1) diagonal and the axis legs
    legs.push_back({1, 0, scale * (cx - cxy / 2.0)});
    legs.push_back({0, 1, scale * (cy - cxy / 2.0)});
    legs.push_back({1, 1, scale * (cxy / 2.0)});
  }
  std::erase_if(legs, [](const StencilLeg& leg) { return leg.weight == 0.0; });
  return from_stencil(n_side, legs);
}

SparseLaplacian path(Index n) {
  if (n < 2) throw Error("path: need n >= 2");
  EdgeList list;
  list.n = n;
  for (Index i = 0; i + 1 < n; ++i) list.edges.push_back({i, i + 1, 1.0});
  return assemble_laplacian(list);
}

SparseLaplacian star(Index n) {
  if (n < 2) throw Error("star: need n >= 2");
  EdgeList list;
  list.n = n;
  for (Index i = 1; i < n; ++i) list.edges.push_back({0, i, 1.0});
  return assemble_laplacian(list);
}

SparseLaplacian complete(Index n) {
  if (n < 2) throw Error("complete: need n >= 2");
  EdgeList list;
  list.n = n;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) list.edges.push_back({i, j, 1.0});
  }
  return assemble_laplacian(list);
}

SparseLaplacian two_hubs(Index leaves) {
  if (leaves < 1) throw Error("two_hubs: need at least one leaf per hub");
  EdgeList list;
  list.n = 2 + 2 * leaves;
  list.edges.push_back({0, 1, 1.0});
  for (Index k = 0; k < leaves; ++k) {
    list.edges.push_back({0, 2 + k, 1.0});
    list.edges.push_back({1, 2 + leaves + k, 1.0});
  }
  return assemble_laplacian(list);
}

SparseLaplacian grid_plus_link(Index n_side, Index u, Index v) {
  SparseLaplacian grid = grid_5pt(n_side);
  EdgeList list = to_edge_list(grid);
  list.edges.push_back({u, v, 1.0});
  return assemble_laplacian(list);
}

SparseLaplacian binary_tree(Index n) {
  if (n < 2) throw Error("binary_tree: need n >= 2");
  EdgeList list;
  list.n = n;
  for (Index i = 1; i < n; ++i) list.edges.push_back({(i - 1) / 2, i, 1.0});
  return assemble_laplacian(list);
}

} // namespace gen
} // namespace lamg
