#include <doctest.h>

#include <cmath>

#include "dense_oracle.hpp"
#include "lamg/components.hpp"
#include "lamg/elimination.hpp"
#include "lamg/generators.hpp"
#include "test_graphs.hpp"

using namespace lamg;
using namespace lamg::testing;

TEST_CASE("select: path sweep picks alternating nodes") {
  SparseLaplacian a = gen::path(5);
  std::vector<Index> f, c;
  select_low_degree_set(a, kMaxEliminationDegree, f, c);
  CHECK(f == std::vector<Index>{0, 2, 4});
  CHECK(c == std::vector<Index>{1, 3});
}

TEST_CASE("select: complete graph has no low-degree nodes") {
  SparseLaplacian a = gen::complete(10);
  std::vector<Index> f, c;
  select_low_degree_set(a, kMaxEliminationDegree, f, c);
  CHECK(f.empty());
  CHECK(c.size() == 10);
}

TEST_CASE("select: star eliminates every leaf") {
  SparseLaplacian a = gen::star(9); // center 0, degree 8
  std::vector<Index> f, c;
  select_low_degree_set(a, kMaxEliminationDegree, f, c);
  CHECK(f.size() == 8);
  CHECK(c == std::vector<Index>{0});
}

TEST_CASE("schur: middle node of a 3-path") {
  SparseLaplacian a = gen::path(3);
  std::vector<Index> f{1}, c{0, 2};
  auto [coarse, stage] = schur_reduce(a, f, c);
  CHECK(coarse.n == 2);
  CHECK(coarse.diag[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(coarse.weight(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("schur: empty F leaves the matrix unchanged") {
  SparseLaplacian a = random_connected(20, 1.0, 3);
  std::vector<Index> f;
  std::vector<Index> c(20);
  for (Index u = 0; u < 20; ++u) c[u] = u;
  auto [coarse, stage] = schur_reduce(a, f, c);
  CHECK(dense_from(coarse) == dense_from(a));
}

TEST_CASE("schur: matches the dense oracle on random graphs") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    SparseLaplacian a = random_connected(60 + 5 * static_cast<Index>(seed), 1.0, 700 + seed);
    std::vector<Index> f, c;
    select_low_degree_set(a, kMaxEliminationDegree, f, c);
    if (f.empty()) continue;
    auto [coarse, stage] = schur_reduce(a, f, c);
    Eigen::MatrixXd expect = dense_schur(dense_from(a), f, c);
    Eigen::MatrixXd got = dense_from(coarse);
    double scale = expect.cwiseAbs().maxCoeff();
    CHECK((got - expect).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    validate_laplacian(coarse);
    // positive weights stay positive
    for (Real v : coarse.val) CHECK(v <= 0.0);
  }
}

TEST_CASE("schur: non-independent F is rejected") {
  SparseLaplacian a = gen::path(4);
  std::vector<Index> f{0, 1}, c{2, 3};
  CHECK_THROWS(schur_reduce(a, f, c));
}

TEST_CASE("rounds: pure paths shrink geometrically") {
  SparseLaplacian a = gen::path(1025);
  auto transfer = eliminate_rounds(a);
  REQUIRE(transfer.has_value());
  Index prev = a.n;
  for (const auto& stage : transfer->stages) {
    CHECK(stage.coarse_n <= static_cast<Index>(0.6 * prev) + 1);
    prev = stage.coarse_n;
  }
  CHECK(transfer->coarse_op.n < 32);
}

TEST_CASE("rounds: complete graph is skipped") {
  SparseLaplacian a = gen::complete(50);
  CHECK(!eliminate_rounds(a).has_value());
}

TEST_CASE("rounds: binary tree loses all its leaves") {
  SparseLaplacian a = gen::binary_tree(127);
  auto transfer = eliminate_rounds(a);
  REQUIRE(transfer.has_value());
  // leaves of the heap-ordered tree are 63..126 (degree 1); all of them must
  // be eliminated at some stage
  for (Index leaf = 63; leaf < 127; ++leaf) {
    Index idx = leaf;
    for (const auto& stage : transfer->stages) {
      idx = stage.coarse_of_parent[idx];
      if (idx < 0) break;
    }
    CHECK(idx < 0);
  }
}

TEST_CASE("rounds: edge growth stays within the degree-4 bound") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    SparseLaplacian a = random_connected(150, 0.4, 900 + seed);
    auto transfer = eliminate_rounds(a);
    if (!transfer) continue;
    // replay the stages and check m_c <= m + 2 |F| for each
    const SparseLaplacian* cur = &a;
    SparseLaplacian scratch;
    for (const auto& stage : transfer->stages) {
      EntryCount prev_m = cur->m;
      auto [coarse, replay] = schur_reduce(*cur, stage.f_nodes, stage.parent_of_coarse);
      CHECK(coarse.m <= prev_m + 2 * static_cast<EntryCount>(stage.f_nodes.size()));
      scratch = std::move(coarse);
      cur = &scratch;
    }
  }
}

TEST_CASE("rounds: connected inputs stay connected per stage") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SparseLaplacian a = random_connected(120, 0.5, 300 + seed);
    auto transfer = eliminate_rounds(a);
    if (!transfer) continue;
    const SparseLaplacian* cur = &a;
    SparseLaplacian scratch;
    for (const auto& stage : transfer->stages) {
      auto [coarse, replay] = schur_reduce(*cur, stage.f_nodes, stage.parent_of_coarse);
      CHECK(connected_components(coarse).count == 1);
      scratch = std::move(coarse);
      cur = &scratch;
    }
  }
}

TEST_CASE("rhs coarsening: zero maps to zero") {
  SparseLaplacian a = gen::path(9);
  auto transfer = eliminate_rounds(a);
  REQUIRE(transfer.has_value());
  Vector b(9, 0.0);
  Vector bc = coarsen_rhs_elim(*transfer, b);
  for (Real v : bc) CHECK(v == 0.0);
}

TEST_CASE("rhs coarsening: hand-worked 3-path") {
  SparseLaplacian a = gen::path(3);
  auto [coarse, stage] = schur_reduce(a, std::vector<Index>{1}, std::vector<Index>{0, 2});
  Vector bc = coarsen_rhs_elim(stage, Vector{1.0, 0.0, -1.0});
  CHECK(bc[0] == 1.0);
  CHECK(bc[1] == -1.0);
}

TEST_CASE("rhs coarsening: matches the dense P^T b") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    SparseLaplacian a = random_connected(50, 0.8, 40 + seed);
    std::vector<Index> f, c;
    select_low_degree_set(a, kMaxEliminationDegree, f, c);
    if (f.empty()) continue;
    auto [coarse, stage] = schur_reduce(a, f, c);
    Vector b = random_vector(a.n, seed, true);

    // dense P = Pi (-A_FC^T A_FF^{-1}, I_C)^T; P^T b = b_C - A_CF A_FF^{-1} b_F
    Eigen::MatrixXd dense = dense_from(a);
    Eigen::VectorXd bf(f.size()), bc_dense(c.size());
    for (std::size_t i = 0; i < f.size(); ++i) bf[i] = b[f[i]];
    for (std::size_t i = 0; i < c.size(); ++i) bc_dense[i] = b[c[i]];
    Eigen::MatrixXd afc(f.size(), c.size());
    Eigen::VectorXd aff_diag(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      aff_diag[i] = dense(f[i], f[i]);
      for (std::size_t j = 0; j < c.size(); ++j) afc(i, j) = dense(f[i], c[j]);
    }
    Eigen::VectorXd expect = bc_dense - afc.transpose() * (bf.cwiseQuotient(aff_diag));

    Vector got = coarsen_rhs_elim(stage, b);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(std::abs(got[i] - expect[i]) <= 1e-12 * std::max(1.0, std::abs(expect[i])));
    }
  }
}

TEST_CASE("backsubstitution: hand-worked 3-path value") {
  SparseLaplacian a = gen::path(3);
  auto [coarse, stage] = schur_reduce(a, std::vector<Index>{1}, std::vector<Index>{0, 2});
  Vector x = backsubstitute_elim(stage, Vector{0.5, -0.5}, Vector{1.0, 0.0, -1.0});
  CHECK(x[0] == 0.5);
  CHECK(x[2] == -0.5);
  CHECK(x[1] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("backsubstitution: constants propagate through zero rhs") {
  SparseLaplacian a = gen::path(9);
  auto transfer = eliminate_rounds(a);
  REQUIRE(transfer.has_value());
  Vector xc(static_cast<std::size_t>(transfer->coarse_op.n), 3.25);
  Vector b(9, 0.0);
  Vector x = backsubstitute_elim(*transfer, xc, b);
  for (Real v : x) CHECK(v == doctest::Approx(3.25).epsilon(1e-14));
}

TEST_CASE("elimination is exact: reduce, dense-solve, back-substitute") {
  int tested = 0;
  for (std::uint64_t seed = 0; tested < 50 && seed < 90; ++seed) {
    Index n = 40 + static_cast<Index>(seed % 7) * 20;
    SparseLaplacian a = random_connected(n, 0.5, 7000 + seed);
    auto transfer = eliminate_rounds(a);
    if (!transfer) continue;
    ++tested;
    Vector b = random_vector(a.n, seed + 1, true);
    Vector bc = coarsen_rhs_elim(*transfer, b);
    Vector xc = pinv_solve(dense_from(transfer->coarse_op), bc);
    Vector x = backsubstitute_elim(*transfer, xc, b);
    Vector r = residual(a, b, x);
    CHECK(norm2(r) <= 1e-10 * norm2(b));

    for (const auto& stage : transfer->stages) {
      // F-independence: stored F rows may only reference C nodes
      for (Index nbr : stage.f_nbr) CHECK(stage.coarse_of_parent[nbr] >= 0);
    }
    validate_laplacian(transfer->coarse_op);
  }
  CHECK(tested == 50);
}
