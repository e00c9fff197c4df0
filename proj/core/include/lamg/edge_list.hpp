#pragma once

#include <string>
#include <vector>

#include "lamg/types.hpp"

namespace lamg {

struct WeightedEdge {
  Index u = 0;
  Index v = 0;
  Real w = 0.0;
};

// Undirected weighted edge list with 0-based node indices.
struct EdgeList {
  Index n = 0;
  std::vector<WeightedEdge> edges;
};

// Canonical form: u < v, sorted lexicographically, duplicate pairs merged by
// summing weights, self-loops dropped (counted in *dropped_self_loops).
EdgeList canonicalized(const EdgeList& input, Index* dropped_self_loops = nullptr);

} // namespace lamg
