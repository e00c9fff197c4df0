// Command line front end: solve graph-Laplacian systems, generate test
// problems, inspect setup hierarchies, and benchmark with MVM-normalized
// performance measures.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <atomic>
#include <thread>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lamg/errors.hpp"
#include "lamg/generators.hpp"
#include "lamg/matrix_market.hpp"
#include "lamg/solver.hpp"
#include "lamg/work.hpp"

using json = nlohmann::json;
using namespace lamg;

namespace {

struct MatrixArgs {
  std::string path;
  std::string kind = "auto";
  bool keep_weights = false;

  MatrixKind matrix_kind() const {
    if (kind == "adjacency") return MatrixKind::Adjacency;
    if (kind == "laplacian") return MatrixKind::Laplacian;
    return MatrixKind::Auto;
  }
};

SparseLaplacian load_matrix(const MatrixArgs& args, std::vector<std::string>& warnings) {
  MatrixMarketOptions opts;
  opts.kind = args.matrix_kind();
  opts.absolute_weight_policy = !args.keep_weights;
  LoadedProblem problem = read_matrix_market_file(args.path, opts);
  return assemble_problem(problem, opts, &warnings);
}

struct GeneratorSpec {
  std::string family;
  Index n = 0;
  double alpha = -M_PI / 4;
  double eps = 0.01;
  std::string alignment = "agnostic";
  Index link_u = 0, link_v = 0;
};

SparseLaplacian build_generator(const GeneratorSpec& g) {
  if (g.family == "grid5") return gen::grid_5pt(g.n);
  if (g.family == "grid13") return gen::grid_13pt_4th(g.n);
  if (g.family == "anis") {
    auto align = g.alignment == "northeast" ? gen::CrossAlignment::Northeast
                                            : gen::CrossAlignment::Agnostic;
    return gen::grid_anis_rotated(g.n, g.alpha, g.eps, align);
  }
  if (g.family == "path") return gen::path(g.n);
  if (g.family == "star") return gen::star(g.n);
  if (g.family == "complete") return gen::complete(g.n);
  if (g.family == "two_hubs") return gen::two_hubs(g.n);
  if (g.family == "grid_plus_link") return gen::grid_plus_link(g.n, g.link_u, g.link_v);
  throw Error("unknown generator family '" + g.family + "'");
}

// Problem token for bench: a file path or family:size[:alignment].
SparseLaplacian build_problem(const std::string& token, std::string& name,
                              std::vector<std::string>& warnings) {
  auto colon = token.find(':');
  static const char* families[] = {"grid5", "grid13", "anis",     "path",
                                   "star",  "complete", "two_hubs"};
  if (colon != std::string::npos) {
    std::string family = token.substr(0, colon);
    for (const char* f : families) {
      if (family == f) {
        GeneratorSpec g;
        g.family = family;
        std::string rest = token.substr(colon + 1);
        auto colon2 = rest.find(':');
        g.n = static_cast<Index>(std::stol(rest.substr(0, colon2)));
        if (colon2 != std::string::npos) g.alignment = rest.substr(colon2 + 1);
        name = token;
        return build_generator(g);
      }
    }
  }
  name = token;
  MatrixArgs args;
  args.path = token;
  return load_matrix(args, warnings);
}

int fail(const std::string& message, int code, const std::string& stats_path = {}) {
  json err;
  err["error"] = message;
  err["exit_code"] = code;
  std::cout << err.dump(2) << "\n";
  if (!stats_path.empty()) {
    std::ofstream out(stats_path);
    if (out) out << err.dump(2) << "\n";
  }
  return code;
}

int error_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return 2;
  return 1;
}

struct SolveArgs {
  MatrixArgs matrix;
  std::string rhs = "random:1";
  double tol_reduction = 1e10;
  double gamma = 1.5;
  std::string correction = "flat";
  double mu = 4.0 / 3.0;
  int max_cycles = 300;
  std::string out_x;
  std::string stats_path;
  std::uint64_t seed = 1;
};

SolverOptions make_options(double gamma, const std::string& correction, double mu,
                           int max_cycles, double tol_reduction, std::uint64_t seed) {
  SolverOptions opts;
  opts.setup.gamma = gamma;
  opts.setup.rng_seed = seed;
  opts.cycle.gamma = gamma;
  opts.cycle.correction = correction == "adaptive" ? CorrectionMode::AdaptiveRecombination
                                                   : CorrectionMode::Flat;
  opts.cycle.mu = mu;
  opts.cycle.max_cycles = max_cycles;
  opts.cycle.target_reduction = tol_reduction;
  opts.cycle.rng_seed = seed;
  return opts;
}

json stats_json(const Prepared& prep, const SolveReport& rep, const SolveArgs& args) {
  const Hierarchy& h = prep.largest();
  PerformanceMeasures pm = performance_measures(
      prep.setup_work, rep.solve_work, rep.stats.residuals.front(), rep.stats.residuals.back());
  json j;
  j["n"] = prep.a.n;
  j["m"] = prep.a.m;
  j["components"] = prep.components.size();
  j["levels"] = h.levels.size();
  j["acf"] = rep.stats.acf;
  j["cycles"] = rep.stats.cycles;
  j["converged"] = rep.converged;
  j["residual_initial"] = rep.stats.residuals.front();
  j["residual_final"] = rep.stats.residuals.back();
  j["reduction"] = rep.reduction;
  j["setup_mvm"] = prep.setup_work;
  j["solve_mvm"] = rep.solve_work;
  j["total_mvm"] = prep.setup_work + rep.solve_work;
  j["t_setup"] = pm.t_setup;
  j["t_solve"] = pm.t_solve;
  j["t_total"] = pm.t_total;
  j["setup_fraction"] = pm.setup_fraction;
  j["storage_per_edge"] = h.storage_per_edge();
  j["edge_ratio"] = h.edge_ratio();
  j["recombinations"] = rep.stats.recombinations;
  j["recomb_max_growth"] = rep.stats.recomb_max_growth;
  j["wall_setup_seconds"] = prep.setup_seconds;
  j["wall_solve_seconds"] = rep.solve_seconds;
  j["seed"] = args.seed;
  j["gamma"] = args.gamma;
  j["correction"] = args.correction;
  j["mu"] = args.mu;
  j["warnings"] = prep.warnings;
  return j;
}

int cmd_solve(const SolveArgs& args) {
  try {
    std::vector<std::string> warnings;
    SparseLaplacian a = load_matrix(args.matrix, warnings);
    work::reset();
    SolverOptions opts = make_options(args.gamma, args.correction, args.mu, args.max_cycles,
                                      args.tol_reduction, args.seed);
    Prepared prep = prepare(std::move(a), opts);
    for (auto& w : warnings) prep.warnings.insert(prep.warnings.begin(), w);

    RhsSpec rhs = parse_rhs_spec(args.rhs);
    if (rhs.mode == RhsSpec::Mode::Random) rhs.seed = rhs.seed == 1 ? args.seed : rhs.seed;
    Vector b = make_rhs(prep.a, rhs);
    SolveReport rep = solve_prepared(prep, b);

    if (!args.out_x.empty()) write_vector_file(args.out_x, rep.x);
    json j = stats_json(prep, rep, args);
    std::cout << j.dump(2) << "\n";
    if (!args.stats_path.empty()) {
      std::ofstream out(args.stats_path);
      if (!out) return fail("cannot open for writing: " + args.stats_path, 2);
      out << j.dump(2) << "\n";
    }
    return rep.converged ? 0 : 3;
  } catch (const DivergedError& e) {
    return fail(std::string("solve diverged: ") + e.what(), 4, args.stats_path);
  } catch (const std::exception& e) {
    return fail(e.what(), error_code_for(e), args.stats_path);
  }
}

int cmd_info(const MatrixArgs& matrix, double gamma, std::uint64_t seed,
             const std::string& out_path) {
  try {
    std::vector<std::string> warnings;
    SparseLaplacian a = load_matrix(matrix, warnings);
    work::reset();
    SolverOptions opts;
    opts.setup.gamma = gamma;
    opts.setup.rng_seed = seed;
    Prepared prep = prepare(std::move(a), opts);
    const Hierarchy& h = prep.largest();
    HierarchyStats stats = hierarchy_stats(h);

    json j;
    j["n"] = prep.a.n;
    j["m"] = prep.a.m;
    j["components"] = prep.components.size();
    j["setup_mvm"] = prep.setup_work;
    j["edge_ratio"] = stats.edge_ratio;
    j["storage_per_edge"] = stats.storage_per_edge;
    j["wall_setup_seconds"] = prep.setup_seconds;
    j["warnings"] = prep.warnings;
    j["levels"] = json::array();
    for (const auto& ls : stats.levels) {
      json level;
      level["level"] = ls.level;
      level["kind"] = ls.kind;
      level["coarsest"] = ls.coarsest;
      level["n"] = ls.n;
      level["m"] = ls.m;
      level["gamma"] = ls.gamma;
      level["nu_pre"] = ls.nu_pre;
      level["nu_post"] = ls.nu_post;
      level["tvs"] = ls.tv_count;
      j["levels"].push_back(level);
    }
    std::cout << j.dump(2) << "\n";
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) return fail("cannot open for writing: " + out_path, 2);
      out << j.dump(2) << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    return fail(e.what(), error_code_for(e));
  }
}

int cmd_gen(const GeneratorSpec& spec, const std::string& out_path, bool laplacian_format) {
  try {
    SparseLaplacian a = build_generator(spec);
    if (out_path.empty() || out_path == "-") {
      write_matrix_market(std::cout, a, laplacian_format);
    } else {
      write_matrix_market_file(out_path, a, laplacian_format);
    }
    return 0;
  } catch (const std::exception& e) {
    return fail(e.what(), error_code_for(e));
  }
}

struct BenchRow {
  std::string name;
  bool ok = false;
  std::string error;
  Index n = 0;
  EntryCount m = 0;
  std::size_t levels = 0;
  PerformanceMeasures pm;
  double acf = 0.0;
  double storage_per_edge = 0.0;
};

BenchRow bench_one(const std::string& token, const SolveArgs& base) {
  BenchRow row;
  row.name = token;
  try {
    std::vector<std::string> warnings;
    std::string name;
    SparseLaplacian a = build_problem(token, name, warnings);
    work::reset();
    SolverOptions opts = make_options(base.gamma, base.correction, base.mu, base.max_cycles,
                                      base.tol_reduction, base.seed);
    Prepared prep = prepare(std::move(a), opts);
    Vector b = make_rhs(prep.a, parse_rhs_spec("random:" + std::to_string(base.seed)));
    SolveReport rep = solve_prepared(prep, b);
    row.ok = true;
    row.n = prep.a.n;
    row.m = prep.a.m;
    row.levels = prep.largest().levels.size();
    row.pm = performance_measures(prep.setup_work, rep.solve_work, rep.stats.residuals.front(),
                                  rep.stats.residuals.back());
    row.acf = rep.stats.acf;
    row.storage_per_edge = prep.largest().storage_per_edge();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

int cmd_bench(const std::vector<std::string>& problems, const SolveArgs& base,
              const std::string& out_path, int jobs) {
  std::vector<BenchRow> rows(problems.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < problems.size(); ++i) rows[i] = bench_one(problems[i], base);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < problems.size(); i = next.fetch_add(1)) {
        rows[i] = bench_one(problems[i], base);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min<int>(jobs, static_cast<int>(problems.size())); ++t) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) t.join();
  }

  std::ostringstream csv;
  csv << "name,n,m,L,t_setup,t_solve,t_total,acf,storage_per_edge,setup_pct\n";
  bool any_failed = false;
  for (const auto& row : rows) {
    if (!row.ok) {
      any_failed = true;
      std::cerr << "bench: " << row.name << " failed: " << row.error << "\n";
      continue;
    }
    char line[512];
    std::snprintf(line, sizeof line, "%s,%d,%lld,%zu,%.4g,%.4g,%.4g,%.4g,%.4g,%.4g\n",
                  row.name.c_str(), row.n, static_cast<long long>(row.m), row.levels,
                  row.pm.t_setup, row.pm.t_solve, row.pm.t_total, row.acf,
                  row.storage_per_edge, 100.0 * row.pm.setup_fraction);
    csv << line;
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    if (!out) return fail("cannot open for writing: " + out_path, 2);
    out << csv.str();
  }
  return any_failed ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"lamg: lean algebraic multigrid solver for graph Laplacians"};
  app.require_subcommand(1);

  // solve
  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "solve A x = b for a graph Laplacian");
  solve_cmd->add_option("--matrix", solve_args.matrix.path, "matrix market input")->required();
  solve_cmd->add_option("--kind", solve_args.matrix.kind, "auto|adjacency|laplacian")
      ->check(CLI::IsMember({"auto", "adjacency", "laplacian"}));
  solve_cmd->add_flag("--keep-weights", solve_args.matrix.keep_weights,
                      "keep large negative weights instead of taking absolute values");
  solve_cmd->add_option("--rhs", solve_args.rhs, "random[:SEED]|zero|file:PATH");
  solve_cmd->add_option("--tol-reduction", solve_args.tol_reduction,
                        "stop once the residual drops by this factor");
  solve_cmd->add_option("--gamma", solve_args.gamma, "cycle index at fine levels");
  solve_cmd->add_option("--correction", solve_args.correction, "flat|adaptive")
      ->check(CLI::IsMember({"flat", "adaptive"}));
  solve_cmd->add_option("--mu", solve_args.mu, "flat energy-correction factor");
  solve_cmd->add_option("--max-cycles", solve_args.max_cycles, "cycle budget");
  solve_cmd->add_option("--out-x", solve_args.out_x, "write the solution vector");
  solve_cmd->add_option("--stats", solve_args.stats_path, "write the stats JSON");
  solve_cmd->add_option("--seed", solve_args.seed, "random seed");

  // gen
  GeneratorSpec gen_spec;
  std::string gen_out;
  bool gen_laplacian = false;
  auto* gen_cmd = app.add_subcommand("gen", "generate a test matrix");
  gen_cmd->add_option("--family", gen_spec.family,
                      "grid5|grid13|anis|path|star|complete|two_hubs|grid_plus_link")
      ->required();
  gen_cmd->add_option("--n", gen_spec.n, "size parameter (grid side or node count)")->required();
  gen_cmd->add_option("--alpha", gen_spec.alpha, "anisotropy angle (anis)");
  gen_cmd->add_option("--eps", gen_spec.eps, "anisotropy strength (anis)");
  gen_cmd->add_option("--alignment", gen_spec.alignment, "agnostic|northeast (anis)")
      ->check(CLI::IsMember({"agnostic", "northeast"}));
  gen_cmd->add_option("--u", gen_spec.link_u, "extra link endpoint (grid_plus_link)");
  gen_cmd->add_option("--v", gen_spec.link_v, "extra link endpoint (grid_plus_link)");
  gen_cmd->add_option("--out", gen_out, "output path (default stdout)");
  gen_cmd->add_flag("--laplacian-format", gen_laplacian,
                    "write matrix values including the diagonal");

  // info
  MatrixArgs info_matrix;
  double info_gamma = 1.5;
  std::uint64_t info_seed = 1;
  std::string info_out;
  auto* info_cmd = app.add_subcommand("info", "run setup only and print hierarchy stats");
  info_cmd->add_option("--matrix", info_matrix.path, "matrix market input")->required();
  info_cmd->add_option("--kind", info_matrix.kind, "auto|adjacency|laplacian")
      ->check(CLI::IsMember({"auto", "adjacency", "laplacian"}));
  info_cmd->add_flag("--keep-weights", info_matrix.keep_weights, "keep large negative weights");
  info_cmd->add_option("--gamma", info_gamma, "cycle index");
  info_cmd->add_option("--seed", info_seed, "random seed");
  info_cmd->add_option("--out", info_out, "also write the JSON here");

  // bench
  SolveArgs bench_args;
  std::vector<std::string> bench_problems;
  std::string bench_out;
  int bench_jobs = 1;
  auto* bench_cmd = app.add_subcommand("bench", "benchmark a list of problems, emit CSV");
  bench_cmd->add_option("--problem", bench_problems,
                        "file path or generator spec, e.g. grid5:128 or anis:64:northeast");
  bench_cmd->add_option("--out", bench_out, "CSV path (default stdout)");
  bench_cmd->add_option("--jobs", bench_jobs, "parallel worker threads");
  bench_cmd->add_option("--tol-reduction", bench_args.tol_reduction, "residual reduction");
  bench_cmd->add_option("--gamma", bench_args.gamma, "cycle index");
  bench_cmd->add_option("--correction", bench_args.correction, "flat|adaptive")
      ->check(CLI::IsMember({"flat", "adaptive"}));
  bench_cmd->add_option("--mu", bench_args.mu, "flat correction factor");
  bench_cmd->add_option("--max-cycles", bench_args.max_cycles, "cycle budget");
  bench_cmd->add_option("--seed", bench_args.seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  if (solve_cmd->parsed()) return cmd_solve(solve_args);
  if (gen_cmd->parsed()) return cmd_gen(gen_spec, gen_out, gen_laplacian);
  if (info_cmd->parsed()) return cmd_info(info_matrix, info_gamma, info_seed, info_out);
  if (bench_cmd->parsed()) return cmd_bench(bench_problems, bench_args, bench_out, bench_jobs);
  return 1;
}
