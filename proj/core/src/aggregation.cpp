#include "lamg/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "lamg/errors.hpp"
#include "lamg/work.hpp"

namespace lamg {

namespace {

constexpr Real kInf = std::numeric_limits<Real>::infinity();

// Position of entry (v,u) given entry (u,v): binary search in row v.
EntryCount mirror_entry(const SparseLaplacian& a, Index u, Index v) {
  auto nb = a.neighbors(v);
  auto it = std::lower_bound(nb.begin(), nb.end(), u);
  return a.row_ptr[v] + (it - nb.begin());
}

// Nodal energy as a quadratic in the value y at node u, one (B, C) pair per
// test vector: E_u(y) = a_uu y^2 / 2 - B y + C.
struct NodalQuadratic {
  Real a_uu = 0.0;
  std::vector<Real> b;
  std::vector<Real> c;
  std::vector<Real> relaxed_min; // C - B^2 / (2 a_uu)

  void build(const SparseLaplacian& a, const TestVectorSet& tvs, Index u) {
    a_uu = a.diag[u];
    b.assign(tvs.count, 0.0);
    c.assign(tvs.count, 0.0);
    relaxed_min.assign(tvs.count, 0.0);
    auto nb = a.neighbors(u);
    auto ov = a.offdiag(u);
    for (std::size_t j = 0; j < nb.size(); ++j) {
      Real w = -ov[j];
      Index v = nb[j];
      for (int k = 0; k < tvs.count; ++k) {
        Real xv = tvs.value(v, k);
        b[k] += w * xv;
        c[k] += 0.5 * w * xv * xv;
      }
    }
    for (int k = 0; k < tvs.count; ++k) {
      relaxed_min[k] = a_uu > 0.0 ? c[k] - b[k] * b[k] / (2.0 * a_uu) : c[k];
    }
  }

  Real at(Real y, int k) const { return 0.5 * a_uu * y * y - b[k] * y + c[k]; }

  Real ratio_vs(const TestVectorSet& tvs, Index s) const {
    Real q = -kInf;
    for (int k = 0; k < tvs.count; ++k) {
      Real den = at(tvs.value(s, k), k);
      if (den <= 0.0) return kInf;
      q = std::max(q, relaxed_min[k] / den);
    }
    return q;
  }

  // Estimated inflation upon aggregating u with s: worst ratio over the
  // test vectors of the nodal energy at y = x_s to the nodal energy after a
  // temporary relaxation step at u. Vectors whose relaxed local energy is
  // not positive carry no inflation signal (possible with negative weights)
  // and are skipped.
  Real inflation_vs(const TestVectorSet& tvs, Index s) const {
    Real q = -kInf;
    for (int k = 0; k < tvs.count; ++k) {
      Real relaxed = relaxed_min[k];
      if (relaxed <= 0.0) continue;
      q = std::max(q, at(tvs.value(s, k), k) / relaxed);
    }
    return q == -kInf ? 1.0 : q;
  }
};

} // namespace

AffinityView compute_affinities(const SparseLaplacian& a, const TestVectorSet& tvs) {
  AffinityView view;
  view.edge_affinity.assign(a.col.size(), 0.0);
  view.node_norm.assign(static_cast<std::size_t>(a.n), 0.0);
  for (Index u = 0; u < a.n; ++u) {
    Real nn = 0.0;
    for (int k = 0; k < tvs.count; ++k) {
      Real x = tvs.value(u, k);
      nn += x * x;
    }
    view.node_norm[u] = nn;
    if (nn == 0.0) view.degenerate.push_back(u);
  }
  for (Index u = 0; u < a.n; ++u) {
    auto nb = a.neighbors(u);
    for (std::size_t j = 0; j < nb.size(); ++j) {
      Index v = nb[j];
      if (v <= u) continue;
      Real c;
      if (view.node_norm[u] == 0.0 || view.node_norm[v] == 0.0) {
        c = 1.0; // degenerate row: maximally distant
      } else {
        Real dot = 0.0;
        for (int k = 0; k < tvs.count; ++k) dot += tvs.value(u, k) * tvs.value(v, k);
        c = 1.0 - (dot * dot) / (view.node_norm[u] * view.node_norm[v]);
        c = std::clamp(c, Real(0.0), Real(1.0));
      }
      view.edge_affinity[a.row_ptr[u] + j] = c;
      view.edge_affinity[mirror_entry(a, u, v)] = c;
    }
  }
  work::add(static_cast<double>(tvs.count) * static_cast<double>(a.m));
  return view;
}

std::vector<Index> detect_hubs(const SparseLaplacian& a) {
  std::vector<Index> hubs;
  for (Index u = 0; u < a.n; ++u) {
    auto nb = a.neighbors(u);
    auto ov = a.offdiag(u);
    if (nb.empty()) continue;
    Real num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < nb.size(); ++j) {
      Real aw = std::abs(ov[j]);
      num += aw * static_cast<Real>(a.degree(nb[j]));
      den += aw;
    }
    if (den == 0.0) continue;
    if (static_cast<Real>(a.degree(u)) >= 8.0 * num / den) hubs.push_back(u);
  }
  return hubs;
}

Real energy_ratio_qus(const SparseLaplacian& a, const TestVectorSet& tvs, Index u, Index s) {
  NodalQuadratic q;
  q.build(a, tvs, u);
  return q.ratio_vs(tvs, s);
}

AggregationTransfer aggregate(const SparseLaplacian& a, const TestVectorSet& tvs, double gamma,
                              std::span<const Index> hubs) {
  const Index n = a.n;
  AffinityView aff = compute_affinities(a, tvs);

  // Edges far weaker than both endpoints' strongest edge are ignored while
  // aggregating; nodes left with no usable edge share one dummy aggregate.
  std::vector<Real> strongest(static_cast<std::size_t>(n), 0.0);
  for (Index u = 0; u < n; ++u) {
    for (Real e : a.offdiag(u)) strongest[u] = std::max(strongest[u], std::abs(e));
  }
  auto edge_usable = [&](Index u, Index v, Real entry) {
    return std::abs(entry) >= kTinyEdgeFraction * std::min(strongest[u], strongest[v]);
  };
  std::vector<char> dummy(static_cast<std::size_t>(n), 0);
  for (Index u = 0; u < n; ++u) {
    bool any = false;
    auto nb = a.neighbors(u);
    auto ov = a.offdiag(u);
    for (std::size_t j = 0; j < nb.size() && !any; ++j) any = edge_usable(u, nb[j], ov[j]);
    dummy[u] = any ? 0 : 1;
  }

  enum : char { kUndecided = 0, kSeed = 1, kAssociate = 2 };
  std::vector<char> status(static_cast<std::size_t>(n), kUndecided);
  std::vector<Index> seed_ref(static_cast<std::size_t>(n), -1);
  for (Index h : hubs) {
    if (!dummy[h]) status[h] = kSeed;
  }

  Index dummy_count = static_cast<Index>(std::count(dummy.begin(), dummy.end(), char(1)));
  auto aggregates_if_finalized = [&]() {
    Index count = dummy_count > 0 ? 1 : 0;
    for (Index u = 0; u < n; ++u) {
      if (!dummy[u] && status[u] != kAssociate) ++count;
    }
    return count;
  };

  const double alpha_max = 0.7 / gamma;
  struct StageResult {
    std::vector<char> status;
    std::vector<Index> seed_ref;
    double alpha;
  };
  std::vector<StageResult> results;

  std::vector<std::pair<Real, Index>> order;
  NodalQuadratic quad;
  for (int stage = 1; stage <= kMaxAggregationStages; ++stage) {
    order.clear();
    for (Index u = 0; u < n; ++u) {
      if (dummy[u] || status[u] != kUndecided) continue;
      Real best = kInf;
      auto nb = a.neighbors(u);
      auto ov = a.offdiag(u);
      for (std::size_t j = 0; j < nb.size(); ++j) {
        if (!edge_usable(u, nb[j], ov[j]) || dummy[nb[j]]) continue;
        best = std::min(best, aff.edge_affinity[a.row_ptr[u] + j]);
      }
      if (best < kInf) order.emplace_back(best, u);
    }
    std::sort(order.begin(), order.end());

    for (const auto& [key, u] : order) {
      if (status[u] != kUndecided) continue; // became a seed meanwhile
      quad.build(a, tvs, u);
      Index best_s = -1;
      Real best_c = kInf;
      auto nb = a.neighbors(u);
      auto ov = a.offdiag(u);
      for (std::size_t j = 0; j < nb.size(); ++j) {
        Index s = nb[j];
        if (dummy[s] || status[s] == kAssociate) continue;
        if (!edge_usable(u, s, ov[j])) continue;
        Real c = aff.edge_affinity[a.row_ptr[u] + j];
        if (c < best_c || (c == best_c && s < best_s)) {
          if (quad.inflation_vs(tvs, s) <= kEnergyRatioThreshold) {
            best_c = c;
            best_s = s;
          }
        }
      }
      if (best_s >= 0) {
        if (status[best_s] == kUndecided) status[best_s] = kSeed;
        status[u] = kAssociate;
        seed_ref[u] = best_s;
      }
    }

    double alpha =
        n > 0 ? static_cast<double>(aggregates_if_finalized()) / static_cast<double>(n) : 1.0;
    results.push_back({status, seed_ref, alpha});
    if (alpha <= alpha_max) break; // coarse enough; another stage only overshoots
  }
  work::add(static_cast<double>(tvs.count) * static_cast<double>(a.m) *
            static_cast<double>(results.size()));

  std::size_t pick = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (std::abs(results[i].alpha - alpha_max) < std::abs(results[pick].alpha - alpha_max)) {
      pick = i;
    }
  }
  status = std::move(results[pick].status);
  seed_ref = std::move(results[pick].seed_ref);

  AggregationTransfer t;
  t.fine_n = n;
  t.stage_used = static_cast<int>(pick) + 1;
  t.aggregate_of.assign(static_cast<std::size_t>(n), -1);
  Index next = 0;
  for (Index u = 0; u < n; ++u) {
    if (dummy[u]) {
      if (t.dummy_aggregate < 0) {
        t.dummy_aggregate = next++;
        t.seed_of.push_back(-1);
      }
      t.aggregate_of[u] = t.dummy_aggregate;
    } else if (status[u] != kAssociate) {
      // seeds, plus still-undecided nodes promoted to singleton seeds
      t.aggregate_of[u] = next;
      t.seed_of.push_back(u);
      ++next;
    }
  }
  for (Index u = 0; u < n; ++u) {
    if (!dummy[u] && status[u] == kAssociate) {
      Index s = seed_ref[u];
      if (s < 0 || t.aggregate_of[s] < 0) throw Error("aggregate: associate without a seed");
      t.aggregate_of[u] = t.aggregate_of[s];
    }
  }
  t.coarse_n = next;
  t.alpha = n > 0 ? static_cast<double>(next) / static_cast<double>(n) : 1.0;
  return t;
}

SparseLaplacian galerkin_coarse_operator(const SparseLaplacian& a,
                                         const AggregationTransfer& t) {
  std::unordered_map<std::uint64_t, Real> weights;
  weights.reserve(static_cast<std::size_t>(a.m));
  auto key = [](Index u, Index v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
  };
  for (Index u = 0; u < a.n; ++u) {
    auto nb = a.neighbors(u);
    auto ov = a.offdiag(u);
    for (std::size_t j = 0; j < nb.size(); ++j) {
      Index v = nb[j];
      if (v <= u) continue;
      Index cu = t.aggregate_of[u];
      Index cv = t.aggregate_of[v];
      if (cu == cv) continue; // intra-aggregate edges vanish
      weights[key(cu, cv)] += -ov[j];
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
  SparseLaplacian coarse = assemble_canonical(t.coarse_n, edges);
  work::add(static_cast<double>(a.m));
  return coarse;
}

Vector aggregate_type(const AggregationTransfer& t, std::span<const Real> x) {
  if (static_cast<Index>(x.size()) != t.fine_n) {
    throw DimensionMismatchError("aggregate_type: length mismatch");
  }
  Vector sums(static_cast<std::size_t>(t.coarse_n), 0.0);
  std::vector<Index> sizes(static_cast<std::size_t>(t.coarse_n), 0);
  for (Index u = 0; u < t.fine_n; ++u) {
    sums[t.aggregate_of[u]] += x[u];
    ++sizes[t.aggregate_of[u]];
  }
  for (Index g = 0; g < t.coarse_n; ++g) {
    if (sizes[g] > 0) sums[g] /= static_cast<Real>(sizes[g]);
  }
  return sums;
}

// Caliber-1 transfers carry unit weights: additions only, no multiplies, so
// they charge nothing under the off-diagonal multiply-add work unit.
void add_interpolated(const AggregationTransfer& t, std::span<const Real> coarse,
                      std::span<Real> fine) {
  for (Index u = 0; u < t.fine_n; ++u) fine[u] += coarse[t.aggregate_of[u]];
}

Vector restrict_residual(const AggregationTransfer& t, std::span<const Real> fine) {
  Vector coarse(static_cast<std::size_t>(t.coarse_n), 0.0);
  for (Index u = 0; u < t.fine_n; ++u) coarse[t.aggregate_of[u]] += fine[u];
  return coarse;
}

} // namespace lamg
