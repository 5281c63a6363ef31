#ifndef MESHGRADE_MESH_HPP
#define MESHGRADE_MESH_HPP

#include <Eigen/Core>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace meshgrade {

struct Node {
  int id = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

// Triangle or quadrilateral; consecutive node ids in cyclic order are edges.
struct Element {
  int id = 0;
  std::vector<int> node_ids;

  bool is_triangle() const { return node_ids.size() == 3; }
  bool is_quadrilateral() const { return node_ids.size() == 4; }
};

// Quad-dominant shell mesh. Construction indexes ids for lookup but performs
// no validation; validate_mesh reports violations as data.
class Mesh {
 public:
  Mesh() = default;
  Mesh(std::vector<Node> nodes, std::vector<Element> elements);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Element>& elements() const { return elements_; }

  bool has_node(int id) const { return node_index_.count(id) != 0; }
  bool has_element(int id) const { return element_index_.count(id) != 0; }

  const Node& node(int id) const;
  const Element& element(int id) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Element> elements_;
  std::unordered_map<int, std::size_t> node_index_;
  std::unordered_map<int, std::size_t> element_index_;
};

enum class Label { passed, rework };

const char* to_string(Label label);
Label label_from_string(const std::string& text);

// Element id -> label. std::map keeps serialization order deterministic.
using LabelSet = std::map<int, Label>;

struct LabelledMesh {
  std::string id;
  Mesh mesh;
  LabelSet labels;
};

struct Finding {
  std::string code;     // e.g. "duplicate-node-id"
  int subject_id = 0;   // offending node or element id
  std::string message;
};

using ValidationReport = std::vector<Finding>;

// Empty report iff every structural invariant holds: unique ids, finite
// positions, element arity 3/4, distinct nodes per element, resolvable node
// references, at least one element, no two elements over the same node set.
ValidationReport validate_mesh(const Mesh& mesh);

// Labels must reference existing elements; complete=true additionally
// requires every element to be labelled (ground-truth use).
ValidationReport validate_labels(const Mesh& mesh, const LabelSet& labels,
                                 bool complete);

// Corner positions as columns, in winding order.
Eigen::Matrix3Xd element_positions(const Mesh& mesh, const Element& element);

}  // namespace meshgrade

#endif
