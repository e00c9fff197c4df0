#include "lamg/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "lamg/components.hpp"
#include "lamg/errors.hpp"
#include "lamg/rng.hpp"

namespace lamg {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw ParseError("matrix market parse error at line " + std::to_string(line) + ": " + what);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct RawEntry {
  Index u;
  Index v;
  Real value;
};

} // namespace

LoadedProblem read_matrix_market(std::istream& in, const MatrixMarketOptions& opts) {
  LoadedProblem out;
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) parse_fail(1, "empty input");
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") parse_fail(lineno, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") parse_fail(lineno, "object must be 'matrix', got '" + object + "'");
  if (format != "coordinate") {
    parse_fail(lineno, "format must be 'coordinate', got '" + format + "'");
  }
  if (field == "integer" || field == "complex") {
    parse_fail(lineno, "field '" + field + "' is not supported, use 'real' or 'pattern'");
  }
  if (field != "real" && field != "pattern") {
    parse_fail(lineno, "unknown field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    parse_fail(lineno, "symmetry must be 'general' or 'symmetric', got '" + symmetry + "'");
  }
  const bool pattern = field == "pattern";
  const bool symmetric = symmetry == "symmetric";

  Index rows = 0, cols = 0;
  std::int64_t nnz = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream sz(line);
    if (!(sz >> rows >> cols >> nnz)) parse_fail(lineno, "malformed size line '" + line + "'");
    break;
  }
  if (rows <= 0) parse_fail(lineno, "matrix has no rows");
  if (rows != cols) {
    parse_fail(lineno, "matrix must be square, got " + std::to_string(rows) + " x " +
                           std::to_string(cols));
  }

  std::vector<RawEntry> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  std::int64_t seen = 0;
  while (seen < nnz) {
    if (!std::getline(in, line)) parse_fail(lineno + 1, "unexpected end of file");
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream row(line);
    std::int64_t u1 = 0, v1 = 0;
    Real value = 1.0;
    if (!(row >> u1 >> v1)) parse_fail(lineno, "malformed entry '" + line + "'");
    if (!pattern && !(row >> value)) parse_fail(lineno, "missing value in '" + line + "'");
    if (u1 < 1 || u1 > rows || v1 < 1 || v1 > rows) {
      parse_fail(lineno, "index out of bounds in '" + line + "'");
    }
    entries.push_back({static_cast<Index>(u1 - 1), static_cast<Index>(v1 - 1), value});
    ++seen;
  }

  // duplicate positions sum (standard coordinate-format semantics)
  std::map<std::pair<Index, Index>, Real> merged;
  for (const auto& e : entries) merged[{e.u, e.v}] += e.value;

  std::vector<Real> diag(static_cast<std::size_t>(rows), 0.0);
  bool has_diag = false;
  std::vector<Real> row_sum(static_cast<std::size_t>(rows), 0.0);
  Real max_diag = 0.0;
  for (const auto& [pos, value] : merged) {
    if (pos.first == pos.second) {
      has_diag = true;
      diag[pos.first] = value;
      max_diag = std::max(max_diag, std::abs(value));
      row_sum[pos.first] += value;
    } else {
      row_sum[pos.first] += value;
      if (symmetric) row_sum[pos.second] += value;
    }
  }

  MatrixKind kind = opts.kind;
  if (kind == MatrixKind::Auto) {
    bool laplacian_like = has_diag && max_diag > 0.0;
    if (laplacian_like) {
      for (Real s : row_sum) {
        if (std::abs(s) > 1e-8 * max_diag) {
          laplacian_like = false;
          break;
        }
      }
    }
    kind = laplacian_like ? MatrixKind::Laplacian : MatrixKind::Adjacency;
  }
  out.was_laplacian = kind == MatrixKind::Laplacian;

  out.edges.n = rows;
  if (kind == MatrixKind::Laplacian) {
    // off-diagonal entries a_uv negate into weights; a general file must
    // store a symmetric value pair
    std::map<std::pair<Index, Index>, Real> pair_value;
    for (const auto& [pos, value] : merged) {
      if (pos.first == pos.second) continue;
      Index u = std::min(pos.first, pos.second);
      Index v = std::max(pos.first, pos.second);
      if (symmetric) {
        pair_value[{u, v}] = value;
        continue;
      }
      auto it = pair_value.find({u, v});
      if (it == pair_value.end()) {
        pair_value[{u, v}] = value;
      } else if (std::abs(it->second - value) >
                 1e-8 * std::max({std::abs(value), std::abs(it->second), Real(1e-300)})) {
        throw ParseError("laplacian input is not symmetric at (" + std::to_string(u + 1) + "," +
                         std::to_string(v + 1) + ")");
      }
    }
    for (const auto& [pos, value] : pair_value) {
      out.edges.edges.push_back({pos.first, pos.second, -value});
    }
  } else {
    Index dropped_diag = 0;
    std::map<std::pair<Index, Index>, Real> weights;
    for (const auto& [pos, value] : merged) {
      if (pos.first == pos.second) {
        ++dropped_diag;
        continue;
      }
      Index u = std::min(pos.first, pos.second);
      Index v = std::max(pos.first, pos.second);
      // directed general inputs symmetrize by summing both directions
      weights[{u, v}] += value;
    }
    if (dropped_diag > 0) {
      out.warnings.push_back("ignored " + std::to_string(dropped_diag) +
                             " diagonal (self-loop) entries in adjacency input");
    }
    for (const auto& [pos, w] : weights) out.edges.edges.push_back({pos.first, pos.second, w});
  }
  return out;
}

LoadedProblem read_matrix_market_file(const std::string& path, const MatrixMarketOptions& opts) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  return read_matrix_market(in, opts);
}

SparseLaplacian assemble_problem(const LoadedProblem& problem, const MatrixMarketOptions& opts,
                                 std::vector<std::string>* warnings) {
  if (warnings) {
    warnings->insert(warnings->end(), problem.warnings.begin(), problem.warnings.end());
  }
  WeightPolicy policy = (!problem.was_laplacian && opts.absolute_weight_policy)
                            ? WeightPolicy::AbsoluteIfLargeNegative
                            : WeightPolicy::Keep;
  return assemble_laplacian(problem.edges, policy, warnings);
}

void write_matrix_market(std::ostream& out, const SparseLaplacian& a, bool as_laplacian) {
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.n << " " << a.n << " " << (as_laplacian ? a.m + a.n : a.m) << "\n";
  char buf[64];
  for (Index u = 0; u < a.n; ++u) {
    if (as_laplacian) {
      std::snprintf(buf, sizeof buf, "%.17g", a.diag[u]);
      out << (u + 1) << " " << (u + 1) << " " << buf << "\n";
    }
    auto nb = a.neighbors(u);
    auto ov = a.offdiag(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      Index v = nb[k];
      if (v < u) continue;
      std::snprintf(buf, sizeof buf, "%.17g", as_laplacian ? ov[k] : -ov[k]);
      // lower-triangle convention: row index >= column index
      out << (v + 1) << " " << (u + 1) << " " << buf << "\n";
    }
  }
}

void write_matrix_market_file(const std::string& path, const SparseLaplacian& a,
                              bool as_laplacian) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_matrix_market(out, a, as_laplacian);
}

RhsSpec parse_rhs_spec(const std::string& text) {
  RhsSpec spec;
  if (text == "zero") {
    spec.mode = RhsSpec::Mode::Zero;
  } else if (text == "random" || text.rfind("random:", 0) == 0) {
    spec.mode = RhsSpec::Mode::Random;
    if (text.size() > 7) {
      spec.seed = std::strtoull(text.c_str() + 7, nullptr, 10);
    }
  } else if (text.rfind("file:", 0) == 0) {
    spec.mode = RhsSpec::Mode::File;
    spec.path = text.substr(5);
  } else {
    throw Error("unknown rhs spec '" + text + "', expected zero|random[:SEED]|file:PATH");
  }
  return spec;
}

Vector make_rhs(Index n, const RhsSpec& spec) {
  switch (spec.mode) {
    case RhsSpec::Mode::Zero:
      return Vector(static_cast<std::size_t>(n), 0.0);
    case RhsSpec::Mode::Random: {
      Rng rng(Rng::derive(spec.seed, 0xb));
      Vector b(static_cast<std::size_t>(n));
      for (Real& v : b) v = rng.next_pm1();
      subtract_mean(b);
      return b;
    }
    case RhsSpec::Mode::File: {
      Vector b = read_vector_file(spec.path);
      if (static_cast<Index>(b.size()) != n) {
        throw DimensionMismatchError("rhs file has " + std::to_string(b.size()) +
                                     " values, expected " + std::to_string(n));
      }
      Real b_inf = 0.0;
      for (Real v : b) b_inf = std::max(b_inf, std::abs(v));
      if (std::abs(vec_sum(b)) > 1e-10 * b_inf) {
        throw IncompatibleRhsError("rhs file sum is not zero");
      }
      return b;
    }
  }
  throw Error("unreachable rhs mode");
}

Vector make_rhs(const SparseLaplacian& a, const RhsSpec& spec) {
  Vector b = make_rhs(a.n, spec);
  if (spec.mode == RhsSpec::Mode::Random) {
    // zero-sum per component keeps every sub-problem compatible
    ComponentSplit split = connected_components(a);
    if (split.count > 1) {
      for (const auto& nodes : split.nodes) {
        Real mean = 0.0;
        for (Index u : nodes) mean += b[u];
        mean /= static_cast<Real>(nodes.size());
        for (Index u : nodes) b[u] -= mean;
      }
    }
  }
  return b;
}

Vector read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  Vector values;
  std::string line;
  std::size_t lineno = 0;
  bool array_header = false;
  std::int64_t expected = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '%') {
      if (lineno == 1 && line.rfind("%%MatrixMarket", 0) == 0) {
        if (lower(line).find("array") == std::string::npos) {
          throw ParseError("vector file must use array format, line 1");
        }
        array_header = true;
      }
      continue;
    }
    std::istringstream row(line);
    if (array_header && expected < 0) {
      std::int64_t r = 0, c = 0;
      if (!(row >> r >> c) || c != 1) {
        throw ParseError("vector array size line malformed at line " + std::to_string(lineno));
      }
      expected = r;
      continue;
    }
    Real v;
    while (row >> v) values.push_back(v);
    if (row.fail() && !row.eof()) {
      throw ParseError("cannot parse vector value at line " + std::to_string(lineno));
    }
  }
  if (expected >= 0 && static_cast<std::int64_t>(values.size()) != expected) {
    throw ParseError("vector file promised " + std::to_string(expected) + " values, found " +
                     std::to_string(values.size()));
  }
  return values;
}

void write_vector_file(const std::string& path, std::span<const Real> x) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  char buf[64];
  for (Real v : x) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << "\n";
  }
}

} // namespace lamg
