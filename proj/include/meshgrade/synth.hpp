#ifndef MESHGRADE_SYNTH_HPP
#define MESHGRADE_SYNTH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "meshgrade/mesh.hpp"

namespace meshgrade {

enum class Surface { flat, cylinder_bend, ridge };

const char* to_string(Surface surface);
Surface surface_from_string(const std::string& text);

enum class DefectKind { sliver, skewed, warped, shrunk, triangulated };

const char* to_string(DefectKind kind);
DefectKind defect_kind_from_string(const std::string& text);

struct DefectSpec {
  DefectKind kind = DefectKind::warped;
  int count = 0;
  // sliver/shrunk: dimensionless factor; skewed/warped: degrees;
  // triangulated ignores it.
  double severity = 1.0;
};

struct SynthSpec {
  int rows = 4;
  int cols = 4;
  double spacing = 1.0;
  Surface surface = Surface::flat;
  double bend_radius = 10.0;     // cylinder_bend only
  double ridge_angle_deg = 30.0; // ridge only
  std::vector<DefectSpec> defects;
  int dilation_radius = 1;
  std::uint64_t seed = 0;
};

// rows x cols quadrilaterals on the chosen surface, everything labelled
// passed. Grid quads are planar on all three surfaces.
std::pair<Mesh, LabelSet> generate_grid(const SynthSpec& spec);

struct InjectionResult {
  Mesh mesh;
  std::vector<int> defect_ids;  // sorted
};

// Seeded placement on quads whose nodes no other defect touches; every
// defect is re-verified to move its metric past the severity margin, with
// re-draws up to a retry cap.
InjectionResult inject_defects(const Mesh& mesh, const SynthSpec& spec);

// rework = union of the radius-rings around the defect elements.
LabelSet dilate_labels(const Mesh& mesh, const std::vector<int>& defect_ids,
                       int radius);

// grid -> defects -> dilated labels.
LabelledMesh generate(const SynthSpec& spec, const std::string& id);

inline constexpr int kBenchmarkMeshCount = 60;

// Seed of one benchmark mesh; recorded in the emitted manifest.
std::uint64_t benchmark_mesh_seed(std::uint64_t seed, int index);

// Desk-scale corpus: 60 mixed-surface meshes of 25..900 elements with a
// rework share near 3%.
std::vector<LabelledMesh> make_benchmark(std::uint64_t seed);

}  // namespace meshgrade

#endif
