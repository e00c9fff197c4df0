#include "lamg/sparse_laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "lamg/errors.hpp"
#include "lamg/work.hpp"

namespace lamg {

EdgeList canonicalized(const EdgeList& input, Index* dropped_self_loops) {
  EdgeList out;
  out.n = input.n;
  out.edges.reserve(input.edges.size());
  Index dropped = 0;
  for (const auto& e : input.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= input.n || e.v >= input.n) {
      throw Error("edge index out of range: (" + std::to_string(e.u) + "," +
                  std::to_string(e.v) + ") with n=" + std::to_string(input.n));
    }
    if (e.u == e.v) {
      ++dropped;
      continue;
    }
    WeightedEdge c = e;
    if (c.u > c.v) std::swap(c.u, c.v);
    out.edges.push_back(c);
  }
  std::sort(out.edges.begin(), out.edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  // merge duplicates by summing weights
  std::size_t w = 0;
  for (std::size_t r = 0; r < out.edges.size(); ++r) {
    if (w > 0 && out.edges[w - 1].u == out.edges[r].u && out.edges[w - 1].v == out.edges[r].v) {
      out.edges[w - 1].w += out.edges[r].w;
    } else {
      out.edges[w++] = out.edges[r];
    }
  }
  out.edges.resize(w);
  if (dropped_self_loops) *dropped_self_loops = dropped;
  return out;
}

Real SparseLaplacian::max_diag() const {
  Real md = 0.0;
  for (Real d : diag) md = std::max(md, std::abs(d));
  return md;
}

Real SparseLaplacian::weight(Index u, Index v) const {
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return 0.0;
  return -val[row_ptr[u] + (it - nb.begin())];
}

SparseLaplacian assemble_canonical(Index n, std::span<const WeightedEdge> edges) {
  if (n <= 0) throw EmptyGraphError("cannot assemble a Laplacian with n = 0");
  SparseLaplacian a;
  a.n = n;
  a.m = static_cast<EntryCount>(edges.size());
  a.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : edges) {
    ++a.row_ptr[e.u + 1];
    ++a.row_ptr[e.v + 1];
  }
  for (Index u = 0; u < n; ++u) a.row_ptr[u + 1] += a.row_ptr[u];
  a.col.resize(static_cast<std::size_t>(2 * a.m));
  a.val.resize(static_cast<std::size_t>(2 * a.m));
  a.diag.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<EntryCount> fill(a.row_ptr.begin(), a.row_ptr.end() - 1);
  for (const auto& e : edges) {
    // canonical order (ascending v per row) holds because edges come sorted
    a.col[fill[e.u]] = e.v;
    a.val[fill[e.u]++] = -e.w;
    a.col[fill[e.v]] = e.u;
    a.val[fill[e.v]++] = -e.w;
    a.diag[e.u] += e.w;
    a.diag[e.v] += e.w;
  }
  // the transpose half of each row may be out of order; sort rows once
  for (Index u = 0; u < n; ++u) {
    auto b = a.row_ptr[u], e = a.row_ptr[u + 1];
    bool sorted = true;
    for (auto k = b + 1; k < e; ++k)
      if (a.col[k - 1] >= a.col[k]) {
        sorted = false;
        break;
      }
    if (sorted) continue;
    std::vector<std::pair<Index, Real>> row;
    row.reserve(e - b);
    for (auto k = b; k < e; ++k) row.emplace_back(a.col[k], a.val[k]);
    std::sort(row.begin(), row.end());
    for (auto k = b; k < e; ++k) {
      a.col[k] = row[k - b].first;
      a.val[k] = row[k - b].second;
    }
  }
  return a;
}

SparseLaplacian assemble_laplacian(const EdgeList& edges, WeightPolicy policy,
                                   std::vector<std::string>* warnings) {
  if (edges.n <= 0) throw EmptyGraphError("cannot assemble a Laplacian with n = 0");
  Index dropped = 0;
  EdgeList canon = canonicalized(edges, &dropped);
  if (dropped > 0 && warnings) {
    warnings->push_back("rejected " + std::to_string(dropped) + " self-loop edge(s)");
  }
  if (policy == WeightPolicy::AbsoluteIfLargeNegative) {
    std::vector<Real> row_abs(static_cast<std::size_t>(canon.n), 0.0);
    for (const auto& e : canon.edges) {
      row_abs[e.u] += std::abs(e.w);
      row_abs[e.v] += std::abs(e.w);
    }
    bool large_negative = false;
    for (const auto& e : canon.edges) {
      if (e.w < -1e-5 * row_abs[e.u] || e.w < -1e-5 * row_abs[e.v]) {
        large_negative = true;
        break;
      }
    }
    if (large_negative) {
      if (warnings) warnings->push_back("large negative edge weight: using absolute values");
      for (auto& e : canon.edges) e.w = std::abs(e.w);
      // merging may have cancelled opposite-signed duplicates; re-merge is
      // not needed since pairs are already unique
    }
  }
  return assemble_canonical(canon.n, canon.edges);
}

EdgeList to_edge_list(const SparseLaplacian& a) {
  EdgeList out;
  out.n = a.n;
  out.edges.reserve(static_cast<std::size_t>(a.m));
  for (Index u = 0; u < a.n; ++u) {
    auto nb = a.neighbors(u);
    auto ov = a.offdiag(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] > u) out.edges.push_back({u, nb[k], -ov[k]});
    }
  }
  return out;
}

void mvm(const SparseLaplacian& a, std::span<const Real> x, std::span<Real> y) {
  if (static_cast<Index>(x.size()) != a.n || static_cast<Index>(y.size()) != a.n) {
    throw DimensionMismatchError("mvm: vector length " + std::to_string(x.size()) +
                                 " does not match n = " + std::to_string(a.n));
  }
  for (Index u = 0; u < a.n; ++u) {
    Real s = a.diag[u] * x[u];
    for (auto k = a.row_ptr[u]; k < a.row_ptr[u + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[u] = s;
  }
  work::add(static_cast<double>(a.m));
}

Vector mvm(const SparseLaplacian& a, const Vector& x) {
  Vector y(x.size());
  mvm(a, std::span<const Real>(x), std::span<Real>(y));
  return y;
}

Vector residual(const SparseLaplacian& a, std::span<const Real> b, std::span<const Real> x) {
  Vector r(static_cast<std::size_t>(a.n));
  mvm(a, x, r);
  for (Index u = 0; u < a.n; ++u) r[u] = b[u] - r[u];
  return r;
}

Real energy(const SparseLaplacian& a, std::span<const Real> x) {
  if (static_cast<Index>(x.size()) != a.n) {
    throw DimensionMismatchError("energy: vector length does not match n");
  }
  Real e = 0.0;
  for (Index u = 0; u < a.n; ++u) {
    for (auto k = a.row_ptr[u]; k < a.row_ptr[u + 1]; ++k) {
      Index v = a.col[k];
      if (v <= u) continue;
      Real d = x[u] - x[v];
      e += -a.val[k] * d * d;
    }
  }
  work::add(static_cast<double>(a.m));
  return e;
}

void validate_laplacian(const SparseLaplacian& a) {
  if (a.n <= 0) throw InvalidLaplacianError("empty matrix");
  if (a.row_ptr.size() != static_cast<std::size_t>(a.n) + 1 ||
      a.col.size() != static_cast<std::size_t>(2 * a.m) || a.col.size() != a.val.size() ||
      a.diag.size() != static_cast<std::size_t>(a.n)) {
    throw InvalidLaplacianError("inconsistent CSR array sizes");
  }
  const Real tol = 1e-10 * std::max(a.max_diag(), Real(1e-300));
  for (Index u = 0; u < a.n; ++u) {
    Real row_sum = a.diag[u];
    for (auto k = a.row_ptr[u]; k < a.row_ptr[u + 1]; ++k) {
      Index v = a.col[k];
      if (v == u) throw InvalidLaplacianError("self entry stored in row " + std::to_string(u));
      if (v < 0 || v >= a.n) throw InvalidLaplacianError("column out of range");
      if (k > a.row_ptr[u] && a.col[k - 1] >= v) {
        throw InvalidLaplacianError("row " + std::to_string(u) + " not strictly sorted");
      }
      // symmetry: locate (v,u)
      auto nb = a.neighbors(v);
      auto it = std::lower_bound(nb.begin(), nb.end(), u);
      if (it == nb.end() || *it != u) {
        throw InvalidLaplacianError("structural asymmetry at (" + std::to_string(u) + "," +
                                    std::to_string(v) + ")");
      }
      Real mirrored = a.val[a.row_ptr[v] + (it - nb.begin())];
      if (mirrored != a.val[k]) {
        throw InvalidLaplacianError("value asymmetry at (" + std::to_string(u) + "," +
                                    std::to_string(v) + ")");
      }
      row_sum += a.val[k];
    }
    if (std::abs(row_sum) > tol) {
      throw InvalidLaplacianError("row " + std::to_string(u) + " sum " + std::to_string(row_sum) +
                                  " exceeds tolerance");
    }
    if (a.degree(u) > 0 && a.diag[u] <= 0.0) {
      throw InvalidLaplacianError("non-positive diagonal at non-isolated node " +
                                  std::to_string(u));
    }
  }
}

Real norm2(std::span<const Real> x) {
  Real s = 0.0;
  for (Real v : x) s += v * v;
  return std::sqrt(s);
}

Real vec_sum(std::span<const Real> x) {
  Real s = 0.0;
  for (Real v : x) s += v;
  return s;
}

void subtract_mean(std::span<Real> x) {
  if (x.empty()) return;
  Real mean = vec_sum(x) / static_cast<Real>(x.size());
  for (Real& v : x) v -= mean;
}

} // namespace lamg
