#include "meshgrade/synth.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "meshgrade/error.hpp"
#include "meshgrade/geometry.hpp"
#include "meshgrade/graph.hpp"
#include "meshgrade/metrics.hpp"
#include "meshgrade/random.hpp"

namespace meshgrade {

namespace {

constexpr int kPlacementRetryCap = 100;
// Defects aim past the requested severity so verification has slack.
constexpr double kSeverityHeadroom = 1.25;

void check_spec(const SynthSpec& spec) {
  if (spec.rows < 2 || spec.cols < 2) {
    throw ConfigError("grid must be at least 2x2 elements");
  }
  if (!(spec.spacing > 0.0)) {
    throw ConfigError("grid spacing must be positive");
  }
  if (spec.surface == Surface::cylinder_bend && !(spec.bend_radius > 0.0)) {
    throw ConfigError("bend radius must be positive");
  }
  if (spec.surface == Surface::ridge &&
      !(spec.ridge_angle_deg > 0.0 && spec.ridge_angle_deg < 90.0)) {
    throw ConfigError("ridge angle must lie in (0, 90) degrees");
  }
  if (spec.dilation_radius < 0) {
    throw ConfigError("dilation radius must be non-negative");
  }
  long total = 0;
  for (const DefectSpec& defect : spec.defects) {
    if (defect.count < 0) throw ConfigError("defect count must be non-negative");
    if (!(defect.severity > 0.0)) {
      throw ConfigError("defect severity must be positive");
    }
    total += defect.count;
  }
  if (total > static_cast<long>(spec.rows) * spec.cols) {
    throw ConfigError("defect count exceeds element capacity");
  }
}

// One-element scratch mesh so defect verification runs through the same
// metric code the property table uses.
Mesh corner_mesh(const std::vector<Eigen::Vector3d>& corners) {
  std::vector<Node> nodes;
  Element element;
  element.id = 1;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    nodes.push_back(Node{id, corners[i]});
    element.node_ids.push_back(id);
  }
  return Mesh(std::move(nodes), {element});
}

double corner_metric(const std::vector<Eigen::Vector3d>& corners,
                     Property property) {
  const Mesh probe = corner_mesh(corners);
  const Element& element = probe.elements().front();
  switch (property) {
    case Property::aspect_ratio:
      return aspect_ratio(probe, element);
    case Property::skewness:
      return skewness(probe, element);
    case Property::warpage:
      return warpage(probe, element);
    case Property::area:
      return element_area(probe, element);
    default:
      throw Error("no defect metric for this property");
  }
}

Eigen::Matrix3Xd corner_matrix(const std::vector<Eigen::Vector3d>& corners) {
  Eigen::Matrix3Xd m(3, static_cast<Eigen::Index>(corners.size()));
  for (std::size_t i = 0; i < corners.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) = corners[i];
  }
  return m;
}

Eigen::Vector3d corner_centroid(const std::vector<Eigen::Vector3d>& corners) {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const Eigen::Vector3d& p : corners) sum += p;
  return sum / static_cast<double>(corners.size());
}

// In-plane squash perpendicular to the longest edge direction; raises the
// aspect ratio to roughly headroom * (1 + severity) on a square.
bool apply_sliver(std::vector<Eigen::Vector3d>& corners, double severity) {
  const double before = corner_metric(corners, Property::aspect_ratio);
  const PlaneBasis basis = least_squares_plane(corner_matrix(corners));
  const Eigen::Vector3d centre = corner_centroid(corners);
  const double factor = 1.0 / (kSeverityHeadroom * (1.0 + severity));
  std::vector<Eigen::Vector3d> moved = corners;
  for (Eigen::Vector3d& p : moved) {
    const double t = (p - centre).dot(basis.v);
    p -= (1.0 - factor) * t * basis.v;
  }
  const double after = corner_metric(moved, Property::aspect_ratio);
  if (after <= 1.0 + severity || after <= before) return false;
  corners = moved;
  return true;
}

// Shear along the plane's first axis, proportional to the second-axis
// offset; tilts one median by atan(shear) degrees.
bool apply_skew(std::vector<Eigen::Vector3d>& corners, double severity) {
  const double before = corner_metric(corners, Property::skewness);
  const double target = std::min(kSeverityHeadroom * severity, 85.0);
  const double shear = std::tan(target / kDegreesPerRadian);
  const PlaneBasis basis = least_squares_plane(corner_matrix(corners));
  const Eigen::Vector3d centre = corner_centroid(corners);
  std::vector<Eigen::Vector3d> moved = corners;
  for (Eigen::Vector3d& p : moved) {
    const double t = (p - centre).dot(basis.v);
    p += shear * t * basis.u;
  }
  if (corner_metric(moved, Property::skewness) < before + severity) {
    return false;
  }
  corners = moved;
  return true;
}

// Lifts one corner along the element normal, growing the offset until the
// fold between the diagonal sub-triangles clears the target.
bool apply_warp(std::vector<Eigen::Vector3d>& corners, double severity,
                std::size_t corner) {
  const double before = corner_metric(corners, Property::warpage);
  const double target = before + severity;
  Eigen::Vector3d normal = polygon_normal_raw(corner_matrix(corners));
  const double scale = normal.norm();
  if (scale <= 0.0) return false;
  normal /= scale;
  double lift = 0.25 * max_edge_length(corner_matrix(corners));
  for (int step = 0; step < 60; ++step) {
    std::vector<Eigen::Vector3d> moved = corners;
    moved[corner] += lift * normal;
    const double after = corner_metric(moved, Property::warpage);
    if (after >= target + severity * (kSeverityHeadroom - 1.0) &&
        after < 179.0) {
      corners = moved;
      return true;
    }
    if (after >= 179.0) return false;
    lift *= 1.5;
  }
  return false;
}

// Uniform contraction towards the centroid; scales area by the squared
// factor.
bool apply_shrink(std::vector<Eigen::Vector3d>& corners, double severity) {
  const double before = corner_metric(corners, Property::area);
  const double factor =
      1.0 / std::sqrt(kSeverityHeadroom * (1.0 + severity));
  const Eigen::Vector3d centre = corner_centroid(corners);
  std::vector<Eigen::Vector3d> moved = corners;
  for (Eigen::Vector3d& p : moved) {
    p = centre + factor * (p - centre);
  }
  if (corner_metric(moved, Property::area) >= before / (1.0 + severity)) {
    return false;
  }
  corners = moved;
  return true;
}

}  // namespace

const char* to_string(Surface surface) {
  switch (surface) {
    case Surface::flat:
      return "flat";
    case Surface::cylinder_bend:
      return "cylinder-bend";
    case Surface::ridge:
      return "ridge";
  }
  return "flat";
}

Surface surface_from_string(const std::string& text) {
  if (text == "flat") return Surface::flat;
  if (text == "cylinder-bend") return Surface::cylinder_bend;
  if (text == "ridge") return Surface::ridge;
  throw ConfigError("unknown surface '" + text + "'");
}

const char* to_string(DefectKind kind) {
  switch (kind) {
    case DefectKind::sliver:
      return "sliver";
    case DefectKind::skewed:
      return "skewed";
    case DefectKind::warped:
      return "warped";
    case DefectKind::shrunk:
      return "shrunk";
    case DefectKind::triangulated:
      return "triangulated";
  }
  return "warped";
}

DefectKind defect_kind_from_string(const std::string& text) {
  if (text == "sliver") return DefectKind::sliver;
  if (text == "skewed") return DefectKind::skewed;
  if (text == "warped") return DefectKind::warped;
  if (text == "shrunk") return DefectKind::shrunk;
  if (text == "triangulated") return DefectKind::triangulated;
  throw ConfigError("unknown defect kind '" + text + "'");
}

std::pair<Mesh, LabelSet> generate_grid(const SynthSpec& spec) {
  check_spec(spec);
  const int node_cols = spec.cols + 1;
  const double fold =
      std::tan(spec.ridge_angle_deg / kDegreesPerRadian);
  // The ridge crease runs along a node column so every quad stays planar.
  const double crease = (spec.cols / 2) * spec.spacing;

  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(spec.rows + 1) * node_cols);
  for (int r = 0; r <= spec.rows; ++r) {
    for (int c = 0; c <= spec.cols; ++c) {
      const double u = c * spec.spacing;
      const double v = r * spec.spacing;
      Eigen::Vector3d p;
      switch (spec.surface) {
        case Surface::flat:
          p = {u, v, 0.0};
          break;
        case Surface::cylinder_bend: {
          const double angle = u / spec.bend_radius;
          p = {spec.bend_radius * std::sin(angle), v,
               spec.bend_radius * (1.0 - std::cos(angle))};
          break;
        }
        case Surface::ridge:
          p = {u, v, u > crease ? (u - crease) * fold : 0.0};
          break;
      }
      nodes.push_back(Node{r * node_cols + c + 1, p});
    }
  }

  std::vector<Element> elements;
  elements.reserve(static_cast<std::size_t>(spec.rows) * spec.cols);
  LabelSet labels;
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const int base = r * node_cols + c + 1;
      Element element;
      element.id = r * spec.cols + c + 1;
      element.node_ids = {base, base + 1, base + node_cols + 1,
                          base + node_cols};
      labels.emplace(element.id, Label::passed);
      elements.push_back(std::move(element));
    }
  }
  return {Mesh(std::move(nodes), std::move(elements)), std::move(labels)};
}

InjectionResult inject_defects(const Mesh& mesh, const SynthSpec& spec) {
  long total = 0;
  for (const DefectSpec& defect : spec.defects) {
    if (defect.count < 0) throw ConfigError("defect count must be non-negative");
    if (!(defect.severity > 0.0)) {
      throw ConfigError("defect severity must be positive");
    }
    total += defect.count;
  }
  if (total > static_cast<long>(mesh.elements().size())) {
    throw ConfigError("defect count exceeds element capacity");
  }

  std::vector<Node> nodes = mesh.nodes();
  std::vector<Element> elements = mesh.elements();
  std::unordered_map<int, std::size_t> node_index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    node_index.emplace(nodes[i].id, i);
  }
  int next_element_id = 0;
  for (const Element& element : elements) {
    next_element_id = std::max(next_element_id, element.id);
  }
  ++next_element_id;

  Rng rng(spec.seed);
  std::unordered_set<int> claimed;
  std::vector<int> defect_ids;

  for (const DefectSpec& defect : spec.defects) {
    for (int instance = 0; instance < defect.count; ++instance) {
      bool placed = false;
      for (int attempt = 0; attempt < kPlacementRetryCap && !placed;
           ++attempt) {
        const std::size_t pick =
            static_cast<std::size_t>(uniform_index(rng, elements.size()));
        const Element element = elements[pick];
        if (!element.is_quadrilateral()) continue;
        bool free = true;
        for (const int id : element.node_ids) {
          if (claimed.count(id) != 0) free = false;
        }
        if (!free) continue;

        if (defect.kind == DefectKind::triangulated) {
          const std::array<int, 4> n = {element.node_ids[0],
                                        element.node_ids[1],
                                        element.node_ids[2],
                                        element.node_ids[3]};
          elements[pick].node_ids = {n[0], n[1], n[2]};
          Element second;
          second.id = next_element_id++;
          second.node_ids = {n[0], n[2], n[3]};
          elements.push_back(std::move(second));
          defect_ids.push_back(element.id);
          defect_ids.push_back(next_element_id - 1);
          claimed.insert(n.begin(), n.end());
          placed = true;
          break;
        }

        std::vector<Eigen::Vector3d> corners;
        corners.reserve(element.node_ids.size());
        for (const int id : element.node_ids) {
          corners.push_back(nodes[node_index.at(id)].position);
        }
        bool ok = false;
        switch (defect.kind) {
          case DefectKind::sliver:
            ok = apply_sliver(corners, defect.severity);
            break;
          case DefectKind::skewed:
            ok = apply_skew(corners, defect.severity);
            break;
          case DefectKind::warped:
            ok = apply_warp(corners, defect.severity,
                            static_cast<std::size_t>(uniform_index(rng, 4)));
            break;
          case DefectKind::shrunk:
            ok = apply_shrink(corners, defect.severity);
            break;
          case DefectKind::triangulated:
            break;
        }
        if (!ok) continue;
        for (std::size_t i = 0; i < corners.size(); ++i) {
          nodes[node_index.at(element.node_ids[i])].position = corners[i];
        }
        claimed.insert(element.node_ids.begin(), element.node_ids.end());
        defect_ids.push_back(element.id);
        placed = true;
      }
      if (!placed) {
        throw Error(std::string("could not place ") + to_string(defect.kind) +
                    " defect after " + std::to_string(kPlacementRetryCap) +
                    " attempts");
      }
    }
  }

  std::sort(defect_ids.begin(), defect_ids.end());
  return {Mesh(std::move(nodes), std::move(elements)), std::move(defect_ids)};
}

LabelSet dilate_labels(const Mesh& mesh, const std::vector<int>& defect_ids,
                       int radius) {
  if (radius < 0) throw ConfigError("dilation radius must be non-negative");
  LabelSet labels;
  for (const Element& element : mesh.elements()) {
    labels.emplace(element.id, Label::passed);
  }
  const NeighbourhoodGraph graph = build_graph(mesh);
  for (const int id : defect_ids) {
    for (const int member : graph.k_ring(id, radius)) {
      labels[member] = Label::rework;
    }
  }
  return labels;
}

LabelledMesh generate(const SynthSpec& spec, const std::string& id) {
  auto [grid, labels] = generate_grid(spec);
  InjectionResult injected = inject_defects(grid, spec);
  LabelledMesh out;
  out.id = id;
  out.labels =
      dilate_labels(injected.mesh, injected.defect_ids, spec.dilation_radius);
  out.mesh = std::move(injected.mesh);
  return out;
}

std::uint64_t benchmark_mesh_seed(std::uint64_t seed, int index) {
  return derive_seed(seed, 1000 + static_cast<std::uint64_t>(index));
}

std::vector<LabelledMesh> make_benchmark(std::uint64_t seed) {
  std::vector<LabelledMesh> corpus;
  corpus.reserve(kBenchmarkMeshCount);
  for (int m = 0; m < kBenchmarkMeshCount; ++m) {
    const std::uint64_t mesh_seed = benchmark_mesh_seed(seed, m);
    Rng meta(derive_seed(mesh_seed, 1));

    SynthSpec spec;
    spec.seed = mesh_seed;
    spec.rows = 5 + static_cast<int>(uniform_index(meta, 26));
    spec.cols = 5 + static_cast<int>(uniform_index(meta, 26));
    spec.spacing = 1.0;
    spec.dilation_radius = 1;
    switch (m % 3) {
      case 0:
        spec.surface = Surface::flat;
        break;
      case 1:
        spec.surface = Surface::cylinder_bend;
        spec.bend_radius =
            spec.cols * spec.spacing * uniform_real(meta, 0.5, 1.0);
        break;
      default:
        spec.surface = Surface::ridge;
        spec.ridge_angle_deg = uniform_real(meta, 20.0, 60.0);
        break;
    }

    const long element_count = static_cast<long>(spec.rows) * spec.cols;
    // A radius-1 ring around one interior defect covers about nine
    // elements, which sets the defect budget for a 3% rework share.
    const int defect_total = std::max(
        1L, std::lround(static_cast<double>(element_count) * 0.03 / 8.5));
    for (int d = 0; d < defect_total; ++d) {
      DefectSpec defect;
      defect.count = 1;
      switch (uniform_index(meta, 5)) {
        case 0:
          defect.kind = DefectKind::sliver;
          defect.severity = uniform_real(meta, 2.0, 4.0);
          break;
        case 1:
          defect.kind = DefectKind::skewed;
          defect.severity = uniform_real(meta, 25.0, 45.0);
          break;
        case 2:
          defect.kind = DefectKind::warped;
          defect.severity = uniform_real(meta, 30.0, 60.0);
          break;
        case 3:
          defect.kind = DefectKind::shrunk;
          defect.severity = uniform_real(meta, 2.0, 4.0);
          break;
        default:
          defect.kind = DefectKind::triangulated;
          defect.severity = 1.0;
          break;
      }
      spec.defects.push_back(defect);
    }

    char name[32];
    std::snprintf(name, sizeof(name), "synth-%03d", m);
    corpus.push_back(generate(spec, name));
  }
  return corpus;
}

}  // namespace meshgrade
