#include "lamg/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "lamg/errors.hpp"
#include "lamg/rng.hpp"
#include "lamg/work.hpp"

namespace lamg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

const Hierarchy& Prepared::largest() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < components.size(); ++i) {
    if (components[i].nodes.size() > components[best].nodes.size()) best = i;
  }
  return components[best].hierarchy;
}

Prepared prepare(SparseLaplacian a, const SolverOptions& opts) {
  Prepared prep;
  prep.a = std::move(a);
  prep.cycle = opts.cycle;
  auto start = Clock::now();
  work::Scope scope;

  ComponentSplit split = connected_components(prep.a);
  SolverOptions local = opts;
  for (Index c = 0; c < split.count; ++c) {
    ComponentRun run;
    run.nodes = split.nodes[c];
    local.setup.rng_seed = Rng::derive(opts.setup.rng_seed, static_cast<std::uint64_t>(c));
    if (run.nodes.size() == 1) {
      // isolated node: trivial zero solution, no hierarchy needed
      prep.components.push_back(std::move(run));
      continue;
    }
    SparseLaplacian sub = split.count == 1 ? prep.a : extract_component(prep.a, run.nodes);
    run.hierarchy = setup(sub, local.setup);
    for (const auto& w : run.hierarchy.warnings) prep.warnings.push_back(w);
    prep.components.push_back(std::move(run));
  }
  prep.setup_work = scope.elapsed() / static_cast<double>(std::max<EntryCount>(prep.a.m, 1));
  prep.setup_seconds = seconds_since(start);
  return prep;
}

SolveReport solve_prepared(const Prepared& prep, std::span<const Real> b,
                           std::span<const Real> x0) {
  if (static_cast<Index>(b.size()) != prep.a.n) {
    throw DimensionMismatchError("solve: rhs length does not match the matrix");
  }
  SolveReport report;
  report.x.assign(static_cast<std::size_t>(prep.a.n), 0.0);
  auto start = Clock::now();
  work::Scope scope;

  std::size_t largest = 0;
  for (std::size_t i = 1; i < prep.components.size(); ++i) {
    if (prep.components[i].nodes.size() > prep.components[largest].nodes.size()) largest = i;
  }

  Rng guess_rng(Rng::derive(prep.cycle.rng_seed, 0x517));
  report.converged = true;
  for (std::size_t i = 0; i < prep.components.size(); ++i) {
    const ComponentRun& run = prep.components[i];
    if (run.nodes.size() == 1) {
      if (std::abs(b[run.nodes[0]]) > 0.0) {
        throw IncompatibleRhsError("nonzero rhs at isolated node " +
                                   std::to_string(run.nodes[0]));
      }
      report.x[run.nodes[0]] = 0.0;
      continue;
    }
    Vector bc(run.nodes.size());
    Vector xc(run.nodes.size());
    for (std::size_t k = 0; k < run.nodes.size(); ++k) {
      bc[k] = b[run.nodes[k]];
      xc[k] = x0.empty() ? guess_rng.next_pm1() : x0[run.nodes[k]];
    }
    auto [x, stats] = solve(run.hierarchy, bc, xc, prep.cycle);
    for (std::size_t k = 0; k < run.nodes.size(); ++k) report.x[run.nodes[k]] = x[k];
    report.converged = report.converged && stats.converged;
    if (i == largest) {
      report.stats = std::move(stats);
      if (!report.stats.residuals.empty() && report.stats.residuals.back() > 0.0) {
        report.reduction = report.stats.residuals.front() / report.stats.residuals.back();
      } else {
        report.reduction = std::numeric_limits<double>::infinity();
      }
    }
  }
  report.solve_work = scope.elapsed() / static_cast<double>(std::max<EntryCount>(prep.a.m, 1));
  report.solve_seconds = seconds_since(start);
  return report;
}

PerformanceMeasures performance_measures(double setup_work, double solve_work, double r0,
                                         double rp) {
  PerformanceMeasures m;
  m.t_setup = setup_work;
  double digits = r0 > 0.0 && rp > 0.0 ? std::log10(r0 / rp) : 0.0;
  m.t_solve = digits > 0.0 ? solve_work / digits : 0.0;
  m.t_total = m.t_setup + 10.0 * m.t_solve;
  m.setup_fraction = m.t_total > 0.0 ? m.t_setup / m.t_total : 0.0;
  return m;
}

} // namespace lamg
