#include "pspin/phase_diagram.hpp"

#include "pspin/errors.hpp"

namespace pspin {
namespace {

double grid_coord(int i, int n) { return static_cast<double>(i) / static_cast<double>(n - 1); }

PhaseDiagram empty_diagram(const ModelParams& params, int n_lambda, int n_s) {
  if (n_lambda < 2 || n_s < 2) {
    throw DomainError("phase diagram resolution must be at least 2x2");
  }
  PhaseDiagram diagram{params, n_lambda, n_s, {}};
  diagram.cells.reserve(static_cast<std::size_t>(n_lambda) * static_cast<std::size_t>(n_s));
  for (int i = 0; i < n_lambda; ++i) {
    for (int j = 0; j < n_s; ++j) {
      diagram.cells.push_back({AnnealPoint(grid_coord(i, n_lambda), grid_coord(j, n_s)), {}});
    }
  }
  return diagram;
}

}  // namespace

PhaseDiagram scan_diagram(const ModelParams& params, int n_lambda, int n_s) {
  PhaseDiagram diagram = empty_diagram(params, n_lambda, n_s);
  const GroundStateSolver solver(params);
  const auto count = static_cast<long>(diagram.cells.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long i = 0; i < count; ++i) {
    auto& cell = diagram.cells[static_cast<std::size_t>(i)];
    cell.state = solver(cell.point);
  }
  return diagram;
}

PhaseDiagram scan_diagram_serial(const ModelParams& params, int n_lambda, int n_s) {
  PhaseDiagram diagram = empty_diagram(params, n_lambda, n_s);
  const GroundStateSolver solver(params);
  for (auto& cell : diagram.cells) {
    cell.state = solver(cell.point);
  }
  return diagram;
}

}  // namespace pspin
