// End-to-end checks of the command line tool: generate, solve, inspect,
// benchmark, and the error contract. Shells out to the built binary.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <algorithm>
#include <vector>

namespace {

int failures = 0;

#define CHECK_MSG(cond, msg)                                                   \
  do {                                                                         \
    if (!(cond)) {                                                             \
      ++failures;                                                              \
      std::cerr << "FAIL at line " << __LINE__ << ": " << msg << "\n";         \
    }                                                                          \
  } while (0)

std::filesystem::path work_dir() {
  auto dir = std::filesystem::temp_directory_path() / "lamg_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  auto out_file = work_dir() / "cmd_output.txt";
  std::string cmd = std::string(LAMG_CLI_PATH) + " " + args + " > " + out_file.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  result.output = ss.str();
  return result;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

int main() {
  auto dir = work_dir();
  auto mtx = dir / "grid.mtx";
  auto stats = dir / "stats.json";
  auto x_out = dir / "x.txt";

  // gen writes a re-readable matrix market file
  {
    RunResult r = run("gen --family grid5 --n 24 --out " + mtx.string());
    CHECK_MSG(r.exit_code == 0, "gen failed: " << r.output);
    std::string content = slurp(mtx);
    CHECK_MSG(content.rfind("%%MatrixMarket matrix coordinate real symmetric", 0) == 0,
              "bad header");
  }

  // solve reaches the requested reduction and emits the stats schema
  {
    RunResult r = run("solve --matrix " + mtx.string() + " --rhs random:7 --seed 3 --stats " +
                      stats.string() + " --out-x " + x_out.string());
    CHECK_MSG(r.exit_code == 0, "solve failed: " << r.output);
    std::string j = slurp(stats);
    for (const char* field :
         {"\"n\"", "\"m\"", "\"levels\"", "\"acf\"", "\"setup_mvm\"", "\"solve_mvm\"",
          "\"setup_fraction\"", "\"storage_per_edge\"", "\"converged\": true",
          "\"wall_setup_seconds\"", "\"wall_solve_seconds\"", "\"reduction\""}) {
      CHECK_MSG(j.find(field) != std::string::npos, "stats missing " << field);
    }
    CHECK_MSG(std::filesystem::exists(x_out), "solution vector not written");
  }

  // determinism: identical seeds give identical stats apart from wall times
  {
    auto s1 = dir / "s1.json";
    auto s2 = dir / "s2.json";
    run("solve --matrix " + mtx.string() + " --rhs random:7 --seed 3 --stats " + s1.string());
    run("solve --matrix " + mtx.string() + " --rhs random:7 --seed 3 --stats " + s2.string());
    auto strip_wall = [](std::string j) {
      std::string out;
      std::istringstream in(j);
      std::string line;
      while (std::getline(in, line)) {
        if (line.find("wall_") == std::string::npos) out += line + "\n";
      }
      return out;
    };
    CHECK_MSG(strip_wall(slurp(s1)) == strip_wall(slurp(s2)), "seeded runs differ");
  }

  // the five-node example solves with a single direct level
  {
    auto small = dir / "small.mtx";
    std::ofstream out(small);
    out << "%%MatrixMarket matrix coordinate real symmetric\n5 5 6\n"
        << "2 1 1\n3 1 1\n4 1 1\n5 1 5\n4 2 1\n4 3 2\n";
    out.close();
    auto s = dir / "small.json";
    RunResult r = run("solve --matrix " + small.string() + " --rhs random:2 --stats " + s.string());
    CHECK_MSG(r.exit_code == 0, "small solve failed: " << r.output);
    std::string j = slurp(s);
    CHECK_MSG(j.find("\"levels\": 1") != std::string::npos, "expected a single level" << j);
  }

  // info reports the first coarsening kind of a long path as elimination
  {
    auto path_mtx = dir / "path.mtx";
    run("gen --family path --n 10000 --out " + path_mtx.string());
    RunResult r = run("info --matrix " + path_mtx.string());
    CHECK_MSG(r.exit_code == 0, "info failed");
    CHECK_MSG(r.output.find("\"kind\": \"elimination\"") != std::string::npos,
              "first coarsening is not elimination: " << r.output);
  }

  // anis generator spot check on the printed northeast corner value
  {
    auto anis = dir / "anis.mtx";
    RunResult r = run("gen --family anis --n 9 --alignment northeast --out " + anis.string());
    CHECK_MSG(r.exit_code == 0, "gen anis failed");
    CHECK_MSG(slurp(anis).find("-0.2475") != std::string::npos,
              "northeast stencil weight missing");
  }

  // bench: empty problem list gives a header-only CSV and exit 0
  {
    RunResult r = run("bench");
    CHECK_MSG(r.exit_code == 0, "empty bench failed");
    CHECK_MSG(r.output == "name,n,m,L,t_setup,t_solve,t_total,acf,storage_per_edge,setup_pct\n",
              "unexpected empty csv: " << r.output);
  }

  // bench: generator specs produce one row each with finite measures
  {
    RunResult r = run("bench --problem grid5:24 --problem path:500 --jobs 2");
    CHECK_MSG(r.exit_code == 0, "bench failed: " << r.output);
    int lines = 0;
    std::istringstream in(r.output);
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK_MSG(lines == 3, "expected header + 2 rows, got " << r.output);
  }

  // the grid scaling set: three rows with per-edge measures within 2x
  {
    RunResult r = run("bench --problem grid5:64 --problem grid5:128 --problem grid5:256");
    CHECK_MSG(r.exit_code == 0, "scaling bench failed");
    std::istringstream in(r.output);
    std::string line;
    std::getline(in, line); // header
    std::vector<double> totals;
    while (std::getline(in, line)) {
      // t_total is the seventh comma-separated field
      std::istringstream row(line);
      std::string field;
      for (int i = 0; i < 7 && std::getline(row, field, ','); ++i) {
      }
      totals.push_back(std::stod(field));
    }
    CHECK_MSG(totals.size() == 3, "expected three rows");
    if (totals.size() == 3) {
      double lo = *std::min_element(totals.begin(), totals.end());
      double hi = *std::max_element(totals.begin(), totals.end());
      CHECK_MSG(hi <= 2.0 * lo, "per-edge totals spread beyond 2x: " << lo << ".." << hi);
    }
  }

  // missing files exit with code 2 and a machine-readable error
  {
    RunResult r = run("solve --matrix /does/not/exist.mtx");
    CHECK_MSG(r.exit_code == 2, "expected exit 2, got " << r.exit_code);
    CHECK_MSG(r.output.find("cannot open") != std::string::npos, "missing error text");
    CHECK_MSG(r.output.find("\"error\"") != std::string::npos, "error not JSON");
  }

  if (failures == 0) {
    std::cout << "cli tests passed\n";
    return 0;
  }
  std::cerr << failures << " cli test(s) failed\n";
  return 1;
}
