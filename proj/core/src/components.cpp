#include "lamg/components.hpp"

#include <algorithm>

#include "lamg/errors.hpp"

namespace lamg {

ComponentSplit connected_components(const SparseLaplacian& a) {
  ComponentSplit split;
  split.label.assign(static_cast<std::size_t>(a.n), -1);
  std::vector<Index> queue;
  queue.reserve(static_cast<std::size_t>(a.n));
  for (Index start = 0; start < a.n; ++start) {
    if (split.label[start] >= 0) continue;
    Index id = split.count++;
    split.label[start] = id;
    queue.clear();
    queue.push_back(start);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Index u = queue[head];
      for (Index v : a.neighbors(u)) {
        if (split.label[v] < 0) {
          split.label[v] = id;
          queue.push_back(v);
        }
      }
    }
  }
  split.nodes.resize(static_cast<std::size_t>(split.count));
  for (Index u = 0; u < a.n; ++u) split.nodes[split.label[u]].push_back(u);
  return split;
}

SparseLaplacian extract_component(const SparseLaplacian& a, std::span<const Index> nodes) {
  std::vector<Index> local(static_cast<std::size_t>(a.n), -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) local[nodes[k]] = static_cast<Index>(k);
  EdgeList sub;
  sub.n = static_cast<Index>(nodes.size());
  for (Index lu = 0; lu < sub.n; ++lu) {
    Index u = nodes[lu];
    auto nb = a.neighbors(u);
    auto ov = a.offdiag(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      Index lv = local[nb[k]];
      if (lv < 0) {
        throw Error("extract_component: node set is not closed under adjacency");
      }
      if (lv > lu) sub.edges.push_back({lu, lv, -ov[k]});
    }
  }
  std::sort(sub.edges.begin(), sub.edges.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
    return x.u != y.u ? x.u < y.u : x.v < y.v;
  });
  return assemble_canonical(sub.n, sub.edges);
}

} // namespace lamg
