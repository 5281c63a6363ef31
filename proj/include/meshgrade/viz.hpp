#ifndef MESHGRADE_VIZ_HPP
#define MESHGRADE_VIZ_HPP

#include <map>
#include <string>

#include "meshgrade/mesh.hpp"

namespace meshgrade {

// Per-element scalars attached to the exported grid. agreement encodes the
// confusion outcome: 0 true negative, 1 true positive, 2 false positive,
// 3 false negative.
struct VizCellData {
  double probability = 0.0;
  int predicted = 0;  // 1 = rework
  int truth = 0;      // 1 = rework
};

inline int agreement_code(int predicted, int truth) {
  if (predicted == truth) return predicted == 1 ? 1 : 0;
  return predicted == 1 ? 2 : 3;
}

// Legacy-ASCII VTK unstructured grid (triangles and quads) with CELL_DATA
// scalars probability, predicted, ground_truth and agreement. Every element
// id must appear in cells.
std::string write_vtk(const Mesh& mesh, const std::map<int, VizCellData>& cells,
                      const std::string& title);

}  // namespace meshgrade

#endif
