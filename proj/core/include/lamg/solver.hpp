#pragma once

#include <string>
#include <vector>

#include "lamg/components.hpp"
#include "lamg/cycle.hpp"
#include "lamg/hierarchy.hpp"

namespace lamg {

// Whole-problem driver: splits the graph into connected components, sets up
// and solves each one independently, and reassembles the solution.

struct SolverOptions {
  SetupOptions setup;
  CycleConfig cycle;
};

struct ComponentRun {
  std::vector<Index> nodes;
  Hierarchy hierarchy;
};

struct Prepared {
  SparseLaplacian a;
  CycleConfig cycle;
  std::vector<ComponentRun> components;
  double setup_work = 0.0; // finest-MVM equivalents over the global edge count
  double setup_seconds = 0.0;
  std::vector<std::string> warnings;

  const Hierarchy& largest() const;
};

Prepared prepare(SparseLaplacian a, const SolverOptions& opts = {});

struct SolveReport {
  Vector x;
  SolveStats stats;       // of the largest component
  double solve_work = 0.0; // all components, finest-MVM equivalents (global m)
  double solve_seconds = 0.0;
  bool converged = false;
  double reduction = 0.0; // r_0 / r_p of the largest component
};

// b must be zero-sum per component (trivial single-node components need
// b_u = 0). Initial guess is random when x0 is empty.
SolveReport solve_prepared(const Prepared& prep, std::span<const Real> b,
                           std::span<const Real> x0 = {});

// Benchmark measures, all in finest-MVM equivalents: setup work, solve work
// per significant figure t_solve = solve_work / log10(r0/rp), and the total
// cost of a ten-figure solve t_setup + 10 t_solve.
struct PerformanceMeasures {
  double t_setup = 0.0;
  double t_solve = 0.0;
  double t_total = 0.0;
  double setup_fraction = 0.0;
};

PerformanceMeasures performance_measures(double setup_work, double solve_work, double r0,
                                         double rp);

} // namespace lamg
