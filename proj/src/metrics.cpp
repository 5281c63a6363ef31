#include "meshgrade/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <unordered_map>

#include "meshgrade/error.hpp"
#include "meshgrade/format.hpp"
#include "meshgrade/geometry.hpp"

namespace meshgrade {

PropertyTable::PropertyTable(std::vector<int> element_ids,
                             Eigen::MatrixXd values)
    : element_ids_(std::move(element_ids)), values_(std::move(values)) {
  if (static_cast<Eigen::Index>(element_ids_.size()) != values_.rows() ||
      values_.cols() != kPropertyCount) {
    throw Error("property table shape mismatch");
  }
}

int PropertyTable::row_of(int element_id) const {
  auto it =
      std::lower_bound(element_ids_.begin(), element_ids_.end(), element_id);
  if (it == element_ids_.end() || *it != element_id) {
    throw Error("no property row for element id " + std::to_string(element_id));
  }
  return static_cast<int>(it - element_ids_.begin());
}

double PropertyTable::value(int element_id, Property property) const {
  return values_(row_of(element_id), static_cast<int>(property));
}

const char* to_string(Property property) {
  switch (property) {
    case Property::skewness: return "skewness";
    case Property::aspect_ratio: return "aspect_ratio";
    case Property::warpage: return "warpage";
    case Property::area: return "area";
    case Property::curvature: return "curvature";
    case Property::is_triangle: return "is_triangle";
    case Property::is_border: return "is_border";
  }
  return "?";
}

Property property_from_string(const std::string& text) {
  for (Property property : kAllProperties) {
    if (text == to_string(property)) return property;
  }
  throw ConfigError("unknown property \"" + text + "\"");
}

namespace {

// Degeneracy gate shared by every normal-based metric.
Eigen::Vector3d checked_raw_normal(const Eigen::Matrix3Xd& corners,
                                   int element_id) {
  const Eigen::Vector3d raw = polygon_normal_raw(corners);
  const double scale = max_edge_length(corners);
  const double norm = raw.norm();
  if (norm < kDegeneracyTolerance * scale * scale || norm == 0.0) {
    throw GeometryError("element " + std::to_string(element_id) +
                        " is degenerate");
  }
  return raw;
}

}  // namespace

Eigen::Vector3d element_normal(const Mesh& mesh, const Element& element) {
  const Eigen::Matrix3Xd corners = element_positions(mesh, element);
  return checked_raw_normal(corners, element.id).normalized();
}

double element_area(const Mesh& mesh, const Element& element) {
  const Eigen::Matrix3Xd corners = element_positions(mesh, element);
  if (element.is_triangle()) {
    return triangle_area(corners.col(0), corners.col(1), corners.col(2));
  }
  const double first =
      triangle_area(corners.col(0), corners.col(1), corners.col(2)) +
      triangle_area(corners.col(0), corners.col(2), corners.col(3));
  const double second =
      triangle_area(corners.col(1), corners.col(2), corners.col(3)) +
      triangle_area(corners.col(1), corners.col(3), corners.col(0));
  return 0.5 * (first + second);
}

double aspect_ratio(const Mesh& mesh, const Element& element) {
  const Eigen::Matrix3Xd corners = element_positions(mesh, element);
  checked_raw_normal(corners, element.id);

  const PlaneBasis basis = least_squares_plane(corners);
  std::vector<Eigen::Vector2d> projected;
  projected.reserve(static_cast<std::size_t>(corners.cols()));
  for (Eigen::Index i = 0; i < corners.cols(); ++i) {
    const Eigen::Vector3d offset = corners.col(i) - basis.origin;
    projected.emplace_back(offset.dot(basis.u), offset.dot(basis.v));
  }

  const std::vector<Eigen::Vector2d> hull = convex_hull(projected);
  const RectangleSides rectangle = min_enclosing_rectangle(hull);
  if (rectangle.short_side <= 0.0) {
    throw GeometryError("element " + std::to_string(element.id) +
                        " is degenerate");
  }
  return rectangle.long_side / rectangle.short_side;
}

double skewness(const Mesh& mesh, const Element& element) {
  if (element.is_triangle()) return 0.0;
  const Eigen::Matrix3Xd corners = element_positions(mesh, element);
  const Eigen::Vector3d median1 =
      0.5 * (corners.col(2) + corners.col(3)) -
      0.5 * (corners.col(0) + corners.col(1));
  const Eigen::Vector3d median2 =
      0.5 * (corners.col(3) + corners.col(0)) -
      0.5 * (corners.col(1) + corners.col(2));
  const double tolerance = kDegeneracyTolerance * max_edge_length(corners);
  if (median1.norm() <= tolerance || median2.norm() <= tolerance) {
    throw GeometryError("element " + std::to_string(element.id) +
                        " has a zero-length median");
  }
  return std::abs(90.0 - angle_between_degrees(median1, median2));
}

double warpage(const Mesh& mesh, const Element& element) {
  if (element.is_triangle()) return 0.0;
  const Eigen::Matrix3Xd corners = element_positions(mesh, element);
  const double scale = max_edge_length(corners);
  const double tolerance = kDegeneracyTolerance * scale * scale;

  auto sub_normal = [&](int a, int b, int c) {
    const Eigen::Vector3d normal =
        (corners.col(b) - corners.col(a))
            .cross(corners.col(c) - corners.col(a));
    if (normal.norm() <= tolerance) {
      throw GeometryError("element " + std::to_string(element.id) +
                          " has a degenerate sub-triangle");
    }
    return normal;
  };

  const double first_split =
      angle_between_degrees(sub_normal(0, 1, 2), sub_normal(0, 2, 3));
  const double second_split =
      angle_between_degrees(sub_normal(1, 2, 3), sub_normal(1, 3, 0));
  return std::max(first_split, second_split);
}

double curvature_angle(const Mesh& mesh, const Element& element,
                       const NeighbourhoodGraph& graph) {
  const Eigen::Vector3d normal = element_normal(mesh, element);
  double result = 0.0;
  for (int neighbour_id : graph.neighbours(element.id)) {
    const Eigen::Vector3d other =
        element_normal(mesh, mesh.element(neighbour_id));
    result = std::max(
        result, fold_to_right_angle(angle_between_degrees(normal, other)));
  }
  return result;
}

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

std::map<int, int> border_flags(const Mesh& mesh) {
  std::unordered_map<std::uint64_t, int> edge_count;
  edge_count.reserve(mesh.elements().size() * 8);
  for (const Element& element : mesh.elements()) {
    const std::size_t n = element.node_ids.size();
    for (std::size_t i = 0; i < n; ++i) {
      ++edge_count[edge_key(element.node_ids[i],
                            element.node_ids[(i + 1) % n])];
    }
  }

  std::map<int, int> flags;
  for (const Element& element : mesh.elements()) {
    const std::size_t n = element.node_ids.size();
    int flag = 0;
    for (std::size_t i = 0; i < n && flag == 0; ++i) {
      if (edge_count[edge_key(element.node_ids[i],
                              element.node_ids[(i + 1) % n])] == 1) {
        flag = 1;
      }
    }
    flags[element.id] = flag;
  }
  return flags;
}

PropertyTable compute_property_table(const Mesh& mesh,
                                     const NeighbourhoodGraph& graph) {
  const std::vector<int>& ids = graph.vertex_ids();
  const int n = static_cast<int>(ids.size());
  Eigen::MatrixXd values(n, kPropertyCount);

  std::vector<Eigen::Vector3d> normals(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Element& element = mesh.element(ids[i]);
    normals[static_cast<std::size_t>(i)] = element_normal(mesh, element);
    values(i, static_cast<int>(Property::skewness)) = skewness(mesh, element);
    values(i, static_cast<int>(Property::aspect_ratio)) =
        aspect_ratio(mesh, element);
    values(i, static_cast<int>(Property::warpage)) = warpage(mesh, element);
    values(i, static_cast<int>(Property::area)) = element_area(mesh, element);
    values(i, static_cast<int>(Property::is_triangle)) =
        element.is_triangle() ? 1.0 : 0.0;
  }

  for (int i = 0; i < n; ++i) {
    double curvature = 0.0;
    for (const int* it = graph.adjacency_begin(i); it != graph.adjacency_end(i);
         ++it) {
      curvature = std::max(
          curvature,
          fold_to_right_angle(angle_between_degrees(
              normals[static_cast<std::size_t>(i)],
              normals[static_cast<std::size_t>(*it)])));
    }
    values(i, static_cast<int>(Property::curvature)) = curvature;
  }

  const std::map<int, int> borders = border_flags(mesh);
  for (int i = 0; i < n; ++i) {
    values(i, static_cast<int>(Property::is_border)) = borders.at(ids[i]);
  }

  return PropertyTable(ids, std::move(values));
}

std::string property_table_csv(const PropertyTable& table) {
  std::ostringstream out;
  out << "element_id,skewness,aspect_ratio,warpage,area,curvature,"
         "is_triangle,is_border\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.element_ids()[i];
    for (int j = 0; j < kPropertyCount; ++j) {
      out << ',' << format_double(table.values()(static_cast<int>(i), j));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace meshgrade
