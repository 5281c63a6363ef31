#include "meshgrade/viz.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "meshgrade/error.hpp"
#include "meshgrade/format.hpp"

namespace meshgrade {

std::string write_vtk(const Mesh& mesh, const std::map<int, VizCellData>& cells,
                      const std::string& title) {
  std::vector<const Node*> nodes;
  nodes.reserve(mesh.nodes().size());
  for (const Node& node : mesh.nodes()) nodes.push_back(&node);
  std::sort(nodes.begin(), nodes.end(),
            [](const Node* a, const Node* b) { return a->id < b->id; });
  std::unordered_map<int, std::size_t> point_index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    point_index.emplace(nodes[i]->id, i);
  }

  std::vector<const Element*> elements;
  elements.reserve(mesh.elements().size());
  for (const Element& element : mesh.elements()) elements.push_back(&element);
  std::sort(elements.begin(), elements.end(),
            [](const Element* a, const Element* b) { return a->id < b->id; });
  for (const Element* element : elements) {
    if (cells.count(element->id) == 0) {
      throw Error("no cell data for element " + std::to_string(element->id));
    }
  }

  std::string out;
  out += "# vtk DataFile Version 2.0\n";
  out += title + "\n";
  out += "ASCII\n";
  out += "DATASET UNSTRUCTURED_GRID\n";

  out += "POINTS " + std::to_string(nodes.size()) + " double\n";
  for (const Node* node : nodes) {
    out += format_double(node->position.x()) + " " +
           format_double(node->position.y()) + " " +
           format_double(node->position.z()) + "\n";
  }

  std::size_t list_length = 0;
  for (const Element* element : elements) {
    list_length += element->node_ids.size() + 1;
  }
  out += "CELLS " + std::to_string(elements.size()) + " " +
         std::to_string(list_length) + "\n";
  for (const Element* element : elements) {
    out += std::to_string(element->node_ids.size());
    for (const int id : element->node_ids) {
      out += " " + std::to_string(point_index.at(id));
    }
    out += "\n";
  }

  out += "CELL_TYPES " + std::to_string(elements.size()) + "\n";
  for (const Element* element : elements) {
    out += element->is_triangle() ? "5\n" : "9\n";
  }

  out += "CELL_DATA " + std::to_string(elements.size()) + "\n";
  out += "SCALARS probability double 1\nLOOKUP_TABLE default\n";
  for (const Element* element : elements) {
    out += format_double(cells.at(element->id).probability) + "\n";
  }
  out += "SCALARS predicted int 1\nLOOKUP_TABLE default\n";
  for (const Element* element : elements) {
    out += std::to_string(cells.at(element->id).predicted) + "\n";
  }
  out += "SCALARS ground_truth int 1\nLOOKUP_TABLE default\n";
  for (const Element* element : elements) {
    out += std::to_string(cells.at(element->id).truth) + "\n";
  }
  out += "SCALARS agreement int 1\nLOOKUP_TABLE default\n";
  for (const Element* element : elements) {
    const VizCellData& data = cells.at(element->id);
    out += std::to_string(agreement_code(data.predicted, data.truth)) + "\n";
  }
  return out;
}

}  // namespace meshgrade
