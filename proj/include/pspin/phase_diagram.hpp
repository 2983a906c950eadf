#pragma once

#include <vector>

#include "pspin/semiclassical.hpp"

namespace pspin {

struct DiagramCell {
  AnnealPoint point;
  SemiClassicalState state;
};

// Rectangular (lambda, s) lattice covering [0,1]x[0,1] including the edges.
// Cells are stored row-major: lambda index outer, s index inner.
struct PhaseDiagram {
  ModelParams params;
  int n_lambda;
  int n_s;
  std::vector<DiagramCell> cells;

  const DiagramCell& at(int i_lambda, int i_s) const {
    return cells[static_cast<std::size_t>(i_lambda) * static_cast<std::size_t>(n_s) +
                 static_cast<std::size_t>(i_s)];
  }
};

// OpenMP kernel; the result does not depend on the thread count.
PhaseDiagram scan_diagram(const ModelParams& params, int n_lambda, int n_s);

// Single-threaded reference used by the tests and the benchmark.
PhaseDiagram scan_diagram_serial(const ModelParams& params, int n_lambda, int n_s);

}  // namespace pspin
