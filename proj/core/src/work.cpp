#include "lamg/work.hpp"

namespace lamg::work {

namespace {
thread_local double g_edge_units = 0.0;
}

double total() { return g_edge_units; }
void reset() { g_edge_units = 0.0; }
void add(double edge_units) { g_edge_units += edge_units; }

} // namespace lamg::work
