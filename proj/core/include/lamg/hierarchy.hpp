#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "lamg/aggregation.hpp"
#include "lamg/elimination.hpp"
#include "lamg/sparse_laplacian.hpp"

namespace lamg {

enum class LevelKind { Finest, Elimination, Aggregation, Coarsest };
enum class CoarsestMode { None, Direct, Relaxation };

class CoarsestSolver; // defined in coarse_solver.cpp

// One hierarchy stage. The transfer describes how this level was derived
// from its parent; gamma/nu are the solve-phase parameters the parent uses
// when visiting this level (elimination levels: gamma 1 and no relaxation;
// aggregation levels: one pre- and two post-sweeps).
struct Level {
  LevelKind kind = LevelKind::Finest;
  SparseLaplacian op;
  std::variant<std::monostate, EliminationTransfer, AggregationTransfer> transfer;
  double gamma = 1.0;
  int nu_pre = 0;
  int nu_post = 0;
  int tv_count = 0;
  CoarsestMode coarsest = CoarsestMode::None;
  std::shared_ptr<const CoarsestSolver> coarsest_solver;

  bool is_elimination() const { return kind == LevelKind::Elimination; }
  bool is_aggregation() const { return kind == LevelKind::Aggregation; }
};

struct Hierarchy {
  std::vector<Level> levels;
  double setup_work = 0.0; // finest-MVM equivalents
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  Index finest_n() const { return levels.front().op.n; }
  EntryCount finest_m() const { return levels.front().op.m; }
  EntryCount total_stored_edges() const;
  double storage_per_edge() const; // (sum_l 2 m_l + n_l) / m_1
  double edge_ratio() const;       // sum_l m_l / m_1
};

struct SetupOptions {
  double gamma = 1.5;
  std::uint64_t rng_seed = 1;
  Index coarsest_n = 150;
  int tv_sweeps = 3;
  int tv_count_finest = 4;
  int tv_count_max = 10;
};

// Builds the level hierarchy for a connected Laplacian: per step, attempt
// low-degree elimination, stop if relaxation alone is fast, otherwise relax
// test vectors and aggregate; stops at coarsest_n nodes, fast relaxation, or
// stagnating aggregation.
Hierarchy setup(const SparseLaplacian& a, const SetupOptions& opts = {});

struct LevelStats {
  int level = 0;
  std::string kind; // creation kind; plain "coarsest" only for one-level setups
  bool coarsest = false;
  Index n = 0;
  EntryCount m = 0;
  double gamma = 0.0;
  int nu_pre = 0;
  int nu_post = 0;
  int tv_count = 0;
};

struct HierarchyStats {
  std::vector<LevelStats> levels;
  double edge_ratio = 0.0;
  double storage_per_edge = 0.0;
  double setup_work = 0.0;
};

HierarchyStats hierarchy_stats(const Hierarchy& h);

// gamma^l for level l (0-based): 1 if the child level is an elimination
// level; the configured gamma while the level still holds more than a tenth
// of the finest edges; min(2, 0.7 m_l / m_{l+1}) on coarser levels.
double level_cycle_index(const Hierarchy& h, std::size_t l, double gamma);

} // namespace lamg
