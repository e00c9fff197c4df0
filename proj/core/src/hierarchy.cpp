#include "lamg/hierarchy.hpp"

#include <algorithm>
#include <cmath>

#include "lamg/coarse_solver.hpp"
#include "lamg/errors.hpp"
#include "lamg/rng.hpp"
#include "lamg/work.hpp"

namespace lamg {

EntryCount Hierarchy::total_stored_edges() const {
  EntryCount total = 0;
  for (const auto& level : levels) total += level.op.m;
  return total;
}

double Hierarchy::storage_per_edge() const {
  double total = 0.0;
  for (const auto& level : levels) {
    total += 2.0 * static_cast<double>(level.op.m) + static_cast<double>(level.op.n);
  }
  return total / static_cast<double>(finest_m());
}

double Hierarchy::edge_ratio() const {
  return static_cast<double>(total_stored_edges()) / static_cast<double>(finest_m());
}

double level_cycle_index(const Hierarchy& h, std::size_t l, double gamma) {
  if (l + 1 >= h.levels.size()) return 1.0;
  if (h.levels[l + 1].is_elimination()) return 1.0;
  const double m1 = static_cast<double>(h.finest_m());
  const double ml = static_cast<double>(h.levels[l].op.m);
  const double mc = static_cast<double>(h.levels[l + 1].op.m);
  if (ml > 0.1 * m1) return gamma;
  if (mc <= 0.0) return 1.0;
  return std::min(2.0, 0.7 * ml / mc);
}

namespace {

int tv_schedule(const SetupOptions& opts, std::size_t level_index) {
  int k = opts.tv_count_finest + 2 * static_cast<int>(level_index);
  return std::min(k, opts.tv_count_max);
}

void mark_coarsest(Hierarchy& h, CoarsestMode mode) {
  Level& last = h.levels.back();
  last.coarsest = mode;
  last.coarsest_solver = mode == CoarsestMode::Direct
                             ? CoarsestSolver::make_direct(last.op)
                             : CoarsestSolver::make_relaxation(last.op);
}

} // namespace

Hierarchy setup(const SparseLaplacian& a, const SetupOptions& opts) {
  validate_laplacian(a);
  work::Scope scope;

  Hierarchy h;
  h.seed = opts.rng_seed;
  h.levels.push_back({LevelKind::Finest, a, std::monostate{}, 1.0, 0, 0, 0});

  int stagnant_rounds = 0;
  constexpr std::size_t kMaxLevels = 100;
  while (h.levels.size() < kMaxLevels) {
    const SparseLaplacian& current = h.levels.back().op;
    if (current.n <= opts.coarsest_n) {
      mark_coarsest(h, CoarsestMode::Direct);
      break;
    }

    if (auto elim = eliminate_rounds(current)) {
      Level level;
      level.kind = LevelKind::Elimination;
      level.op = std::move(elim->coarse_op);
      validate_laplacian(level.op);
      elim->coarse_op = SparseLaplacian{}; // operator lives on the level
      level.transfer = std::move(*elim);
      level.gamma = 1.0;
      h.levels.push_back(std::move(level));
      continue;
    }

    std::uint64_t level_seed = Rng::derive(opts.rng_seed, h.levels.size());
    RelaxProbe probe = probe_relaxation(current, kProbeSweeps, level_seed);
    if (probe.factor <= kFastRelaxationFactor) {
      mark_coarsest(h, CoarsestMode::Relaxation);
      break;
    }

    int k = tv_schedule(opts, h.levels.size() - 1);
    TestVectorSet tvs = generate_tvs(current, k, opts.tv_sweeps, level_seed);
    std::vector<Index> hubs = detect_hubs(current);
    AggregationTransfer agg = aggregate(current, tvs, opts.gamma, hubs);
    if (agg.coarse_n >= current.n) {
      h.warnings.push_back("aggregation made no progress at level " +
                           std::to_string(h.levels.size()) + "; level becomes coarsest");
      mark_coarsest(h, CoarsestMode::Direct);
      break;
    }

    Level level;
    level.kind = LevelKind::Aggregation;
    level.op = galerkin_coarse_operator(current, agg);
    validate_laplacian(level.op);
    level.gamma = 1.0;
    level.nu_pre = 1;
    level.nu_post = 2;
    level.tv_count = k;
    bool stagnant = agg.alpha > 0.95;
    level.transfer = std::move(agg);
    h.levels.push_back(std::move(level));

    if (stagnant && ++stagnant_rounds >= 2) {
      h.warnings.push_back("aggregation stagnated twice; stopping coarsening");
      mark_coarsest(h, CoarsestMode::Direct);
      break;
    }
  }

  if (h.levels.back().coarsest == CoarsestMode::None) {
    h.warnings.push_back("level cap reached before the coarsening terminated");
    mark_coarsest(h, CoarsestMode::Direct);
  }

  // solve-phase cycle indices need the whole ladder, assign afterwards
  for (std::size_t l = 0; l + 1 < h.levels.size(); ++l) {
    double g = level_cycle_index(h, l, opts.gamma);
    h.levels[l + 1].gamma = g;
  }

  h.setup_work = scope.elapsed() / static_cast<double>(h.finest_m());
  return h;
}

HierarchyStats hierarchy_stats(const Hierarchy& h) {
  HierarchyStats stats;
  stats.levels.reserve(h.levels.size());
  for (std::size_t l = 0; l < h.levels.size(); ++l) {
    const Level& level = h.levels[l];
    LevelStats ls;
    ls.level = static_cast<int>(l) + 1;
    ls.coarsest = level.coarsest != CoarsestMode::None;
    switch (level.kind) {
      case LevelKind::Finest: ls.kind = ls.coarsest ? "coarsest" : "finest"; break;
      case LevelKind::Elimination: ls.kind = "elimination"; break;
      case LevelKind::Aggregation: ls.kind = "aggregation"; break;
      case LevelKind::Coarsest: ls.kind = "coarsest"; break;
    }
    ls.n = level.op.n;
    ls.m = level.op.m;
    ls.gamma = l + 1 < h.levels.size() ? h.levels[l + 1].gamma : 0.0;
    if (l + 1 < h.levels.size()) {
      ls.nu_pre = h.levels[l + 1].is_aggregation() ? 1 : 0;
      ls.nu_post = h.levels[l + 1].is_aggregation() ? 2 : 0;
    }
    ls.tv_count = level.tv_count;
    stats.levels.push_back(std::move(ls));
  }
  stats.edge_ratio = h.edge_ratio();
  stats.storage_per_edge = h.storage_per_edge();
  stats.setup_work = h.setup_work;
  return stats;
}

} // namespace lamg
