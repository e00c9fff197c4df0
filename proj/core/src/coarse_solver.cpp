#include "lamg/coarse_solver.hpp"

#include <Eigen/Dense>

#include "lamg/components.hpp"
#include "lamg/errors.hpp"
#include "lamg/smoothing.hpp"
#include "lamg/work.hpp"

namespace lamg {

namespace {

Eigen::MatrixXd bordered_dense(const SparseLaplacian& a) {
  const Index n = a.n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (Index u = 0; u < n; ++u) {
    m(u, u) = a.diag[u];
    for (auto k = a.row_ptr[u]; k < a.row_ptr[u + 1]; ++k) m(u, a.col[k]) = a.val[k];
    m(u, n) = 1.0;
    m(n, u) = 1.0;
  }
  return m;
}

class DirectSolver final : public CoarsestSolver {
public:
  explicit DirectSolver(const SparseLaplacian& a) : n_(a.n), m_(a.m) {
    ComponentSplit split = connected_components(a);
    if (split.count == 1) {
      components_.push_back({{}, Eigen::PartialPivLU<Eigen::MatrixXd>(bordered_dense(a))});
    } else {
      // a disconnected coarsest graph would make the single bordered matrix
      // singular; solve each component under its own mean constraint
      for (const auto& nodes : split.nodes) {
        SparseLaplacian sub = extract_component(a, nodes);
        components_.push_back(
            {std::vector<Index>(nodes.begin(), nodes.end()),
             Eigen::PartialPivLU<Eigen::MatrixXd>(bordered_dense(sub))});
      }
    }
    // factorization cost, charged once at construction
    double nn = static_cast<double>(n_) + 1.0;
    work::add(nn * nn * nn / 3.0);
  }

  void solve(std::span<const Real> b, std::span<Real> x) const override {
    for (const auto& comp : components_) {
      const std::size_t cn = comp.nodes.empty() ? static_cast<std::size_t>(n_) : comp.nodes.size();
      Eigen::VectorXd rhs(cn + 1);
      for (std::size_t k = 0; k < cn; ++k) {
        rhs[k] = comp.nodes.empty() ? b[k] : b[comp.nodes[k]];
      }
      rhs[cn] = 0.0;
      Eigen::VectorXd sol = comp.lu.solve(rhs);
      for (std::size_t k = 0; k < cn; ++k) {
        if (comp.nodes.empty()) {
          x[k] = sol[k];
        } else {
          x[comp.nodes[k]] = sol[k];
        }
      }
    }
    // back-substitution on the cached factor, accounted as one MVM here
    work::add(static_cast<double>(m_));
  }

private:
  struct Component {
    std::vector<Index> nodes; // empty means "all"
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  };
  Index n_;
  EntryCount m_;
  std::vector<Component> components_;
};

class RelaxationSolver final : public CoarsestSolver {
public:
  explicit RelaxationSolver(const SparseLaplacian& a) : a_(a) {}

  void solve(std::span<const Real> b, std::span<Real> x) const override {
    Vector r = residual(a_, b, x);
    Real r0 = norm2(r);
    if (r0 == 0.0) return;
    const Real target = 1e-12 * r0;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      gauss_seidel_sweep(a_, b, x);
      subtract_mean(x);
      r = residual(a_, b, x);
      if (norm2(r) <= target) break;
    }
  }

private:
  static constexpr int kMaxSweeps = 400;
  SparseLaplacian a_;
};

} // namespace

std::shared_ptr<const CoarsestSolver> CoarsestSolver::make_direct(const SparseLaplacian& a) {
  return std::make_shared<DirectSolver>(a);
}

std::shared_ptr<const CoarsestSolver> CoarsestSolver::make_relaxation(const SparseLaplacian& a) {
  return std::make_shared<RelaxationSolver>(a);
}

} // namespace lamg
