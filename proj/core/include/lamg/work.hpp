#pragma once

namespace lamg::work {

// Global work accounting in "edge units": one unit is one stored off-diagonal
// multiply-add. An operation on a level with m undirected edges charges m
// units per matrix-vector product or relaxation sweep; dividing a total by
// the finest-level edge count yields finest-MVM-equivalents.
//
// The counter is thread local so concurrent solves do not interfere.

double total();
void reset();
void add(double edge_units);

// RAII scope measuring the units spent between construction and elapsed().
class Scope {
public:
  Scope() : start_(total()) {}
  double elapsed() const { return total() - start_; }

private:
  double start_;
};

} // namespace lamg::work
