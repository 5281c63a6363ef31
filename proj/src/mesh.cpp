#include "meshgrade/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "meshgrade/error.hpp"

namespace meshgrade {

Mesh::Mesh(std::vector<Node> nodes, std::vector<Element> elements)
    : nodes_(std::move(nodes)), elements_(std::move(elements)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    node_index_.emplace(nodes_[i].id, i);  // keeps first on duplicate
  }
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    element_index_.emplace(elements_[i].id, i);
  }
}

const Node& Mesh::node(int id) const {
  auto it = node_index_.find(id);
  if (it == node_index_.end()) {
    throw Error("unknown node id " + std::to_string(id));
  }
  return nodes_[it->second];
}

const Element& Mesh::element(int id) const {
  auto it = element_index_.find(id);
  if (it == element_index_.end()) {
    throw Error("unknown element id " + std::to_string(id));
  }
  return elements_[it->second];
}

const char* to_string(Label label) {
  return label == Label::rework ? "rework" : "passed";
}

Label label_from_string(const std::string& text) {
  if (text == "rework") return Label::rework;
  if (text == "passed") return Label::passed;
  throw ParseError("unknown label \"" + text + "\"");
}

namespace {

void add(ValidationReport& report, std::string code, int subject,
         std::string message) {
  report.push_back({std::move(code), subject, std::move(message)});
}

}  // namespace

ValidationReport validate_mesh(const Mesh& mesh) {
  ValidationReport report;

  std::set<int> node_ids;
  for (const Node& node : mesh.nodes()) {
    if (!node_ids.insert(node.id).second) {
      add(report, "duplicate-node-id", node.id,
          "node id " + std::to_string(node.id) + " occurs more than once");
    }
    if (!node.position.allFinite()) {
      add(report, "nonfinite-position", node.id,
          "node " + std::to_string(node.id) +
              " has a non-finite coordinate");
    }
  }

  if (mesh.elements().empty()) {
    add(report, "empty-mesh", 0, "mesh has no elements");
  }

  std::set<int> element_ids;
  std::set<std::vector<int>> node_sets;
  for (const Element& element : mesh.elements()) {
    if (!element_ids.insert(element.id).second) {
      add(report, "duplicate-element-id", element.id,
          "element id " + std::to_string(element.id) +
              " occurs more than once");
    }
    if (element.node_ids.size() != 3 && element.node_ids.size() != 4) {
      add(report, "bad-arity", element.id,
          "element " + std::to_string(element.id) + " has " +
              std::to_string(element.node_ids.size()) +
              " nodes, expected 3 or 4");
      continue;  // remaining checks assume a tri or quad
    }

    std::vector<int> sorted = element.node_ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      add(report, "repeated-node", element.id,
          "element " + std::to_string(element.id) +
              " references a node more than once");
    } else if (!node_sets.insert(sorted).second) {
      add(report, "duplicate-element", element.id,
          "element " + std::to_string(element.id) +
              " covers the same nodes as an earlier element");
    }

    for (int node_id : element.node_ids) {
      if (!mesh.has_node(node_id)) {
        add(report, "unknown-node", element.id,
            "element " + std::to_string(element.id) +
                " references missing node " + std::to_string(node_id));
      }
    }
  }

  return report;
}

ValidationReport validate_labels(const Mesh& mesh, const LabelSet& labels,
                                 bool complete) {
  ValidationReport report;
  for (const auto& [element_id, label] : labels) {
    (void)label;
    if (!mesh.has_element(element_id)) {
      add(report, "unknown-element", element_id,
          "label references missing element " + std::to_string(element_id));
    }
  }
  if (complete) {
    for (const Element& element : mesh.elements()) {
      if (labels.count(element.id) == 0) {
        add(report, "unlabelled-element", element.id,
            "element " + std::to_string(element.id) + " has no label");
      }
    }
  }
  return report;
}

Eigen::Matrix3Xd element_positions(const Mesh& mesh, const Element& element) {
  Eigen::Matrix3Xd corners(3, element.node_ids.size());
  for (std::size_t i = 0; i < element.node_ids.size(); ++i) {
    corners.col(static_cast<Eigen::Index>(i)) =
        mesh.node(element.node_ids[i]).position;
  }
  return corners;
}

}  // namespace meshgrade
