#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lamg/edge_list.hpp"
#include "lamg/sparse_laplacian.hpp"
#include "lamg/types.hpp"

namespace lamg {

enum class MatrixKind {
  Auto,      // Laplacian if diagonals are present and row sums vanish
  Adjacency, // entries are edge weights
  Laplacian, // entries are matrix values; off-diagonals negate into weights
};

struct MatrixMarketOptions {
  MatrixKind kind = MatrixKind::Auto;
  // Adjacency inputs: take absolute weights when a large negative weight is
  // present (Laplacian inputs always keep their values).
  bool absolute_weight_policy = true;
};

struct LoadedProblem {
  EdgeList edges;      // undirected, canonical
  bool was_laplacian = false;
  std::vector<std::string> warnings;
};

// Reads coordinate real/pattern Matrix Market data (general or symmetric).
// General adjacency input is symmetrized by summing both directions of each
// pair. 1-based indices become 0-based. Integer and complex fields are
// rejected with the offending line number.
LoadedProblem read_matrix_market(std::istream& in, const MatrixMarketOptions& opts = {});
LoadedProblem read_matrix_market_file(const std::string& path,
                                      const MatrixMarketOptions& opts = {});

SparseLaplacian assemble_problem(const LoadedProblem& problem,
                                 const MatrixMarketOptions& opts = {},
                                 std::vector<std::string>* warnings = nullptr);

// Writes coordinate real symmetric data (one triangle). With as_laplacian the
// matrix values including the diagonal are written; otherwise the edge
// weights.
void write_matrix_market(std::ostream& out, const SparseLaplacian& a, bool as_laplacian = false);
void write_matrix_market_file(const std::string& path, const SparseLaplacian& a,
                              bool as_laplacian = false);

// Right-hand sides. Random mode draws uniform[-1,1) and subtracts the mean
// per connected component so every component is compatible.
struct RhsSpec {
  enum class Mode { Zero, Random, File } mode = Mode::Random;
  std::uint64_t seed = 1;
  std::string path;
};

RhsSpec parse_rhs_spec(const std::string& text); // "zero" | "random:SEED" | "file:PATH"

Vector make_rhs(Index n, const RhsSpec& spec);
Vector make_rhs(const SparseLaplacian& a, const RhsSpec& spec);

// Plain text vectors, one value per line; also accepts Matrix Market array
// headers on read.
Vector read_vector_file(const std::string& path);
void write_vector_file(const std::string& path, std::span<const Real> x);

} // namespace lamg
