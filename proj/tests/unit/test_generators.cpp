#include <doctest.h>

#include <cmath>

#include "dense_oracle.hpp"
#include "lamg/generators.hpp"
#include "test_graphs.hpp"

using namespace lamg;
using namespace lamg::testing;

namespace {

// entry of the assembled operator between grid nodes offset by (dx,dy) from
// an interior anchor
Real interior_entry(const SparseLaplacian& a, Index n_side, Index dx, Index dy) {
  Index ci = n_side / 2, cj = n_side / 2;
  Index u = ci * n_side + cj;
  Index v = (ci + dx) * n_side + (cj + dy);
  return -a.weight(u, v);
}

} // namespace

TEST_CASE("grid_5pt: smallest grid is the 4-cycle") {
  SparseLaplacian a = gen::grid_5pt(2);
  CHECK(a.n == 4);
  CHECK(a.m == 4);
  for (Real d : a.diag) CHECK(d == 2.0);
}

TEST_CASE("grid_5pt: interior diagonal is 4, rows close to zero") {
  SparseLaplacian a = gen::grid_5pt(3);
  CHECK(a.diag[4] == 4.0); // center of the 3x3 grid
  validate_laplacian(a);
  Vector ones(a.n, 1.0);
  for (Real v : mvm(a, ones)) CHECK(v == 0.0);
}

TEST_CASE("grid_5pt: edge count formula 2N(N-1)") {
  for (Index n : {2, 3, 8, 32}) {
    CHECK(gen::grid_5pt(n).m == 2 * static_cast<EntryCount>(n) * (n - 1));
  }
}

TEST_CASE("grid_13pt: interior row carries the fourth-order stencil") {
  SparseLaplacian a = gen::grid_13pt_4th(9);
  CHECK(interior_entry(a, 9, 1, 0) == -16.0);
  CHECK(interior_entry(a, 9, -1, 0) == -16.0);
  CHECK(interior_entry(a, 9, 0, 1) == -16.0);
  CHECK(interior_entry(a, 9, 2, 0) == 1.0);
  CHECK(interior_entry(a, 9, 0, -2) == 1.0);
  Index center = (9 / 2) * 9 + 9 / 2;
  CHECK(a.diag[center] == 60.0);
  validate_laplacian(a);
}

TEST_CASE("grid_13pt: too-small grids are rejected") {
  CHECK_THROWS(gen::grid_13pt_4th(4));
}

TEST_CASE("grid_13pt: edge count formula 2N(2N-3)") {
  for (Index n : {5, 8, 16}) {
    CHECK(gen::grid_13pt_4th(n).m == 2 * static_cast<EntryCount>(n) * (2 * n - 3));
  }
  // the formula at N=1024 gives the published large-grid count
  CHECK(2 * static_cast<EntryCount>(1024) * (2 * 1024 - 3) == 4188160);
}

TEST_CASE("grid_13pt: positive semidefinite under Neumann closure") {
  SparseLaplacian a = gen::grid_13pt_4th(16);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense_from(a));
  CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("anisotropic agnostic: printed stencil values at alpha=-pi/4") {
  SparseLaplacian a = gen::grid_anis_rotated(9, -M_PI / 4, 0.01, gen::CrossAlignment::Agnostic);
  // axis entries -0.25250; corner magnitudes 0.12375 with alternating signs
  CHECK(interior_entry(a, 9, 1, 0) == doctest::Approx(-0.25250).epsilon(1e-5));
  CHECK(interior_entry(a, 9, 0, 1) == doctest::Approx(-0.25250).epsilon(1e-5));
  CHECK(std::abs(interior_entry(a, 9, 1, 1)) == doctest::Approx(0.12375).epsilon(1e-5));
  CHECK(std::abs(interior_entry(a, 9, 1, -1))== doctest::Approx(0.12375).epsilon(1e-5));
  CHECK(interior_entry(a, 9, 1, 1) == -interior_entry(a, 9, 1, -1));
  // zero-row-sum closure pins the interior diagonal at 2(cx + cy)/2 = 1.0100
  Index center = (9 / 2) * 9 + 9 / 2;
  CHECK(a.diag[center] == doctest::Approx(1.0100).epsilon(1e-5));
  validate_laplacian(a);
}

TEST_CASE("anisotropic northeast: printed stencil values at alpha=-pi/4") {
  SparseLaplacian a = gen::grid_anis_rotated(9, -M_PI / 4, 0.01, gen::CrossAlignment::Northeast);
  CHECK(interior_entry(a, 9, 1, 0) == doctest::Approx(-0.5).epsilon(1e-5));
  CHECK(interior_entry(a, 9, 0, 1) == doctest::Approx(-0.5).epsilon(1e-5));
  CHECK(interior_entry(a, 9, 1, 1) == doctest::Approx(0.24750).epsilon(1e-5));
  CHECK(a.weight(9 / 2 * 9 + 9 / 2, (9 / 2 + 1) * 9 + 9 / 2 - 1) == 0.0); // no NW leg
  Index center = (9 / 2) * 9 + 9 / 2;
  CHECK(a.diag[center] == doctest::Approx(1.5050).epsilon(1e-5));
  validate_laplacian(a);
}

TEST_CASE("anisotropic: eps=1 collapses to a scaled 5-point operator") {
  SparseLaplacian a = gen::grid_anis_rotated(6, 0.73, 1.0, gen::CrossAlignment::Agnostic);
  SparseLaplacian ref = gen::grid_5pt(6);
  CHECK(a.m == ref.m); // no diagonal legs remain
  Eigen::MatrixXd da = dense_from(a);
  Eigen::MatrixXd dr = 0.5 * dense_from(ref);
  CHECK((da - dr).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("anisotropic: edge count formulas") {
  for (Index n : {4, 9}) {
    EntryCount axis = 2 * static_cast<EntryCount>(n) * (n - 1);
    EntryCount diag_both = 2 * static_cast<EntryCount>(n - 1) * (n - 1);
    CHECK(gen::grid_anis_rotated(n, -M_PI / 4, 0.01, gen::CrossAlignment::Agnostic).m ==
          axis + diag_both);
    CHECK(gen::grid_anis_rotated(n, -M_PI / 4, 0.01, gen::CrossAlignment::Northeast).m ==
          axis + diag_both / 2);
  }
  // published large-grid counts follow from the same formulas at N=1024
  EntryCount axis_1024 = 2 * static_cast<EntryCount>(1024) * 1023;
  CHECK(axis_1024 == 2095104);
  CHECK(axis_1024 + 2 * static_cast<EntryCount>(1023) * 1023 == 4188162);
  CHECK(axis_1024 + static_cast<EntryCount>(1023) * 1023 == 3141633);
}

TEST_CASE("5-point and 13-point agree with dense stencil assembly on small grids") {
  for (Index n : {5, 8}) {
    SparseLaplacian a5 = gen::grid_5pt(n);
    SparseLaplacian a13 = gen::grid_13pt_4th(n);
    Eigen::MatrixXd d5 = Eigen::MatrixXd::Zero(n * n, n * n);
    Eigen::MatrixXd d13 = Eigen::MatrixXd::Zero(n * n, n * n);
    auto addleg = [&](Eigen::MatrixXd& m, Index i, Index j, Index dx, Index dy, Real w) {
      Index ii = i + dx, jj = j + dy;
      if (ii < 0 || jj < 0 || ii >= n || jj >= n) return;
      m(i * n + j, ii * n + jj) -= w;
      m(i * n + j, i * n + j) += w;
    };
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        for (auto [dx, dy] : {std::pair<Index, Index>{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
          addleg(d5, i, j, dx, dy, 1.0);
          addleg(d13, i, j, dx, dy, 16.0);
        }
        for (auto [dx, dy] : {std::pair<Index, Index>{2, 0}, {-2, 0}, {0, 2}, {0, -2}}) {
          addleg(d13, i, j, dx, dy, -1.0);
        }
      }
    }
    CHECK((dense_from(a5) - d5).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((dense_from(a13) - d13).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("structured families") {
  SparseLaplacian p = gen::path(5);
  CHECK(p.diag == Vector{1, 2, 2, 2, 1});

  SparseLaplacian hubs = gen::two_hubs(50);
  CHECK(hubs.n == 102);
  CHECK(hubs.degree(0) == 51);
  CHECK(hubs.degree(1) == 51);
  CHECK(hubs.weight(0, 1) == 1.0);

  SparseLaplacian linked = gen::grid_plus_link(4, 0, 15);
  CHECK(linked.m == gen::grid_5pt(4).m + 1);
  CHECK(linked.weight(0, 15) == 1.0);

  SparseLaplacian k5 = gen::complete(5);
  CHECK(k5.m == 10);
  for (Real d : k5.diag) CHECK(d == 4.0);
}
