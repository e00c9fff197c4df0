#include "lamg/elimination.hpp"

#include <algorithm>
#include <unordered_map>

#include "lamg/errors.hpp"
#include "lamg/work.hpp"

namespace lamg {

void select_low_degree_set(const SparseLaplacian& a, Index max_degree, std::vector<Index>& f,
                           std::vector<Index>& c) {
  f.clear();
  c.clear();
  std::vector<char> eligible(static_cast<std::size_t>(a.n), 1);
  std::vector<char> in_f(static_cast<std::size_t>(a.n), 0);
  for (Index u = 0; u < a.n; ++u) {
    Index deg = a.degree(u);
    if (!eligible[u] || deg == 0 || deg > max_degree || a.diag[u] <= 0.0) continue;
    in_f[u] = 1;
    f.push_back(u);
    for (Index v : a.neighbors(u)) eligible[v] = 0;
  }
  for (Index u = 0; u < a.n; ++u) {
    if (!in_f[u]) c.push_back(u);
  }
}

std::pair<SparseLaplacian, ElimStage> schur_reduce(const SparseLaplacian& a,
                                                   std::span<const Index> f,
                                                   std::span<const Index> c) {
  ElimStage stage;
  stage.parent_n = a.n;
  stage.coarse_n = static_cast<Index>(c.size());
  stage.coarse_of_parent.assign(static_cast<std::size_t>(a.n), -1);
  stage.parent_of_coarse.assign(c.begin(), c.end());
  for (std::size_t k = 0; k < c.size(); ++k) stage.coarse_of_parent[c[k]] = static_cast<Index>(k);

  stage.f_nodes.assign(f.begin(), f.end());
  stage.f_ptr.push_back(0);
  for (Index fu : f) {
    if (stage.coarse_of_parent[fu] >= 0) {
      throw Error("schur_reduce: F and C overlap at node " + std::to_string(fu));
    }
    if (a.diag[fu] <= 0.0) {
      throw SingularDiagonalError("schur_reduce: non-positive pivot at node " +
                                  std::to_string(fu));
    }
    stage.f_diag.push_back(a.diag[fu]);
    auto nb = a.neighbors(fu);
    auto ov = a.offdiag(fu);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (stage.coarse_of_parent[nb[k]] < 0) {
        throw Error("schur_reduce: F is not independent, edge (" + std::to_string(fu) + "," +
                    std::to_string(nb[k]) + ")");
      }
      stage.f_nbr.push_back(nb[k]);
      stage.f_val.push_back(ov[k]);
    }
    stage.f_ptr.push_back(static_cast<EntryCount>(stage.f_nbr.size()));
  }

  // Coarse edges: retained C-C edges plus, per eliminated f, a clique over
  // its C neighbors with weight w_fu * w_fv / a_ff added to each pair.
  std::unordered_map<std::uint64_t, Real> weights;
  weights.reserve(static_cast<std::size_t>(a.m));
  auto key = [](Index u, Index v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
  };
  for (Index cu : c) {
    auto nb = a.neighbors(cu);
    auto ov = a.offdiag(cu);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      Index v = nb[k];
      if (stage.coarse_of_parent[v] < 0) continue;
      if (v > cu) weights[key(stage.coarse_of_parent[cu], stage.coarse_of_parent[v])] += -ov[k];
    }
  }
  for (std::size_t i = 0; i < stage.f_nodes.size(); ++i) {
    Real aff = stage.f_diag[i];
    for (auto p = stage.f_ptr[i]; p < stage.f_ptr[i + 1]; ++p) {
      for (auto q = p + 1; q < stage.f_ptr[i + 1]; ++q) {
        Index cu = stage.coarse_of_parent[stage.f_nbr[p]];
        Index cv = stage.coarse_of_parent[stage.f_nbr[q]];
        // w_fu * w_fv / a_ff with stored entries a_fv = -w_fv
        weights[key(cu, cv)] += (stage.f_val[p] * stage.f_val[q]) / aff;
      }
    }
  }

  std::vector<WeightedEdge> edges;
  edges.reserve(weights.size());
  for (const auto& [k, w] : weights) {
    if (w == 0.0) continue;
    edges.push_back({static_cast<Index>(k >> 32), static_cast<Index>(k & 0xffffffffu), w});
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
    return x.u != y.u ? x.u < y.u : x.v < y.v;
  });
  SparseLaplacian coarse = assemble_canonical(stage.coarse_n, edges);
  work::add(static_cast<double>(a.m + coarse.m));
  return {std::move(coarse), std::move(stage)};
}

std::optional<EliminationTransfer> eliminate_rounds(const SparseLaplacian& a) {
  EliminationTransfer transfer;
  const SparseLaplacian* current = &a;
  std::vector<Index> f, c;
  while (current->n > 1) {
    select_low_degree_set(*current, kMaxEliminationDegree, f, c);
    if (static_cast<double>(f.size()) < kMinEliminationFraction * current->n || f.empty() ||
        c.empty()) {
      break;
    }
    auto [coarse, stage] = schur_reduce(*current, f, c);
    transfer.stages.push_back(std::move(stage));
    transfer.coarse_op = std::move(coarse);
    current = &transfer.coarse_op;
  }
  if (transfer.stages.empty()) return std::nullopt;
  return transfer;
}

Vector coarsen_rhs_elim(const ElimStage& s, std::span<const Real> b) {
  if (static_cast<Index>(b.size()) != s.parent_n) {
    throw DimensionMismatchError("coarsen_rhs_elim: length mismatch");
  }
  Vector bc(static_cast<std::size_t>(s.coarse_n));
  for (Index k = 0; k < s.coarse_n; ++k) bc[k] = b[s.parent_of_coarse[k]];
  for (std::size_t i = 0; i < s.f_nodes.size(); ++i) {
    Real scaled = b[s.f_nodes[i]] / s.f_diag[i];
    for (auto p = s.f_ptr[i]; p < s.f_ptr[i + 1]; ++p) {
      bc[s.coarse_of_parent[s.f_nbr[p]]] -= s.f_val[p] * scaled;
    }
  }
  work::add(static_cast<double>(s.f_val.size()));
  return bc;
}

Vector coarsen_rhs_elim(const EliminationTransfer& t, std::span<const Real> b) {
  Vector cur(b.begin(), b.end());
  for (const auto& s : t.stages) cur = coarsen_rhs_elim(s, cur);
  return cur;
}

Vector restrict_elim(const EliminationTransfer& t, std::span<const Real> x) {
  Vector cur(x.begin(), x.end());
  for (const auto& s : t.stages) {
    Vector next(static_cast<std::size_t>(s.coarse_n));
    for (Index k = 0; k < s.coarse_n; ++k) next[k] = cur[s.parent_of_coarse[k]];
    cur = std::move(next);
  }
  return cur;
}

Vector backsubstitute_elim(const ElimStage& s, std::span<const Real> x_c,
                           std::span<const Real> b) {
  if (static_cast<Index>(x_c.size()) != s.coarse_n ||
      static_cast<Index>(b.size()) != s.parent_n) {
    throw DimensionMismatchError("backsubstitute_elim: length mismatch");
  }
  Vector x(static_cast<std::size_t>(s.parent_n), 0.0);
  for (Index k = 0; k < s.coarse_n; ++k) x[s.parent_of_coarse[k]] = x_c[k];
  for (std::size_t i = 0; i < s.f_nodes.size(); ++i) {
    Real sum = b[s.f_nodes[i]];
    for (auto p = s.f_ptr[i]; p < s.f_ptr[i + 1]; ++p) sum -= s.f_val[p] * x[s.f_nbr[p]];
    x[s.f_nodes[i]] = sum / s.f_diag[i];
  }
  work::add(static_cast<double>(s.f_val.size()));
  return x;
}

Vector backsubstitute_elim(const EliminationTransfer& t, std::span<const Real> x_c,
                           std::span<const Real> b) {
  // rebuild the per-stage right-hand sides going down, then substitute up
  std::vector<Vector> stage_rhs;
  stage_rhs.reserve(t.stages.size());
  Vector cur(b.begin(), b.end());
  for (const auto& s : t.stages) {
    stage_rhs.push_back(cur);
    cur = coarsen_rhs_elim(s, cur);
  }
  Vector x(x_c.begin(), x_c.end());
  for (std::size_t i = t.stages.size(); i-- > 0;) {
    x = backsubstitute_elim(t.stages[i], x, stage_rhs[i]);
  }
  return x;
}

} // namespace lamg
