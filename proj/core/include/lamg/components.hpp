#pragma once

#include <vector>

#include "lamg/sparse_laplacian.hpp"
#include "lamg/types.hpp"

namespace lamg {

struct ComponentSplit {
  Index count = 0;
  std::vector<Index> label;               // component id per node
  std::vector<std::vector<Index>> nodes;  // ascending node list per component
};

// Breadth-first labeling in O(n + m).
ComponentSplit connected_components(const SparseLaplacian& a);

// Sub-Laplacian induced by `nodes` (must be a whole component so that no
// edges are cut). Node k of the result corresponds to nodes[k].
SparseLaplacian extract_component(const SparseLaplacian& a, std::span<const Index> nodes);

} // namespace lamg
