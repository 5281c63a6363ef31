#ifndef MESHGRADE_METRICS_HPP
#define MESHGRADE_METRICS_HPP

#include <Eigen/Core>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "meshgrade/graph.hpp"
#include "meshgrade/mesh.hpp"

namespace meshgrade {

// Fixed column order of the per-element property table.
enum class Property : int {
  skewness = 0,      // degrees in [0, 90], triangles 0
  aspect_ratio = 1,  // >= 1
  warpage = 2,       // degrees in [0, 180], triangles 0
  area = 3,          // squared input units
  curvature = 4,     // degrees in [0, 90], max over 1-ring
  is_triangle = 5,   // 0/1
  is_border = 6,     // 0/1
};

inline constexpr int kPropertyCount = 7;

inline constexpr std::array<Property, kPropertyCount> kAllProperties = {
    Property::skewness,  Property::aspect_ratio, Property::warpage,
    Property::area,      Property::curvature,    Property::is_triangle,
    Property::is_border,
};

const char* to_string(Property property);
Property property_from_string(const std::string& text);

// An element is degenerate when its normal magnitude falls below this
// factor times the squared maximum edge length.
inline constexpr double kDegeneracyTolerance = 1e-12;

// Rows follow element_ids() (ascending); columns follow Property.
class PropertyTable {
 public:
  PropertyTable(std::vector<int> element_ids, Eigen::MatrixXd values);

  std::size_t size() const { return element_ids_.size(); }
  const std::vector<int>& element_ids() const { return element_ids_; }
  const Eigen::MatrixXd& values() const { return values_; }

  int row_of(int element_id) const;  // throws on unknown id
  double value(int element_id, Property property) const;

 private:
  std::vector<int> element_ids_;
  Eigen::MatrixXd values_;
};

// Unit normal following winding; Newell construction, so non-planar quads
// get the generalized-plane normal. Degenerate elements throw.
Eigen::Vector3d element_normal(const Mesh& mesh, const Element& element);

// Triangle area, or the mean of the quadrilateral's two diagonal-split
// triangulations, so node traversal order never matters. Degenerate
// elements yield 0.
double element_area(const Mesh& mesh, const Element& element);

// Long/short side of the minimum-area rectangle enclosing the nodes
// projected onto their least-squares plane.
double aspect_ratio(const Mesh& mesh, const Element& element);

// |90 deg - angle between the two midpoint medians| for quads; 0 for
// triangles.
double skewness(const Mesh& mesh, const Element& element);

// Max over both diagonal splits of the angle between the two sub-triangle
// normals; 0 for triangles and planar quads.
double warpage(const Mesh& mesh, const Element& element);

// Max over 1-ring neighbours of the normal-to-normal angle folded into
// [0, 90]; 0 without neighbours.
double curvature_angle(const Mesh& mesh, const Element& element,
                       const NeighbourhoodGraph& graph);

// 1 iff some element edge is shared with no other element.
std::map<int, int> border_flags(const Mesh& mesh);

PropertyTable compute_property_table(const Mesh& mesh,
                                     const NeighbourhoodGraph& graph);

// Header "element_id,skewness,aspect_ratio,warpage,area,curvature,
// is_triangle,is_border", rows by ascending element id.
std::string property_table_csv(const PropertyTable& table);

}  // namespace meshgrade

#endif
