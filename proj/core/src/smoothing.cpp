#include "lamg/smoothing.hpp"

#include <cmath>

#include "lamg/errors.hpp"
#include "lamg/rng.hpp"
#include "lamg/work.hpp"

namespace lamg {

namespace {

inline void gs_update(const SparseLaplacian& a, std::span<const Real> b, std::span<Real> x,
                      Index u) {
  Real s = b.empty() ? 0.0 : b[u];
  for (auto k = a.row_ptr[u]; k < a.row_ptr[u + 1]; ++k) s -= a.val[k] * x[a.col[k]];
  if (a.diag[u] == 0.0) {
    if (a.degree(u) == 0) {
      // isolated node: equation 0 * x_u = b_u; leave x_u untouched
      return;
    }
    throw SingularDiagonalError("zero diagonal at node " + std::to_string(u));
  }
  x[u] = s / a.diag[u];
}

} // namespace

void gauss_seidel_sweep(const SparseLaplacian& a, std::span<const Real> b, std::span<Real> x,
                        SweepOrder order) {
  if (static_cast<Index>(x.size()) != a.n || (!b.empty() && b.size() != x.size())) {
    throw DimensionMismatchError("gauss_seidel_sweep: vector length mismatch");
  }
  if (order == SweepOrder::Forward) {
    for (Index u = 0; u < a.n; ++u) gs_update(a, b, x, u);
  } else {
    for (Index u = a.n; u-- > 0;) gs_update(a, b, x, u);
  }
  work::add(static_cast<double>(a.m));
}

TestVectorSet generate_tvs(const SparseLaplacian& a, int count, int sweeps, std::uint64_t seed) {
  TestVectorSet tvs;
  tvs.n = a.n;
  tvs.count = count;
  tvs.sweeps = sweeps;
  tvs.columns.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(k)));
    Vector x(static_cast<std::size_t>(a.n));
    for (Real& v : x) v = rng.next_pm1();
    for (int s = 0; s < sweeps; ++s) gauss_seidel_sweep(a, {}, x);
    subtract_mean(x);
    tvs.columns.push_back(std::move(x));
  }
  return tvs;
}

RelaxProbe probe_relaxation(const SparseLaplacian& a, int sweeps, std::uint64_t seed) {
  RelaxProbe probe;
  probe.sweeps = sweeps;
  Rng rng(Rng::derive(seed, 0x9));
  Vector x(static_cast<std::size_t>(a.n));
  for (Real& v : x) v = rng.next_pm1();
  subtract_mean(x);

  auto a_norm = [&](const Vector& v) {
    Real e = energy(a, v);
    return e > 0.0 ? std::sqrt(e) : 0.0;
  };

  int half = sweeps / 2;
  Real norm_mid = 0.0;
  for (int s = 0; s < sweeps; ++s) {
    gauss_seidel_sweep(a, {}, x);
    subtract_mean(x);
    if (s + 1 == half) norm_mid = a_norm(x);
  }
  Real norm_end = a_norm(x);
  if (half == 0) {
    norm_mid = 0.0; // degenerate sweeps<2 guarded by caller contract
  }
  if (norm_end == 0.0 || norm_mid == 0.0) {
    probe.factor = 0.0;
    return probe;
  }
  probe.factor = std::pow(norm_end / norm_mid, 1.0 / static_cast<double>(sweeps - half));
  return probe;
}

} // namespace lamg
