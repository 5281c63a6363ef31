#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "meshgrade/error.hpp"
#include "meshgrade/graph.hpp"
#include "meshgrade/mesh_io.hpp"
#include "meshgrade/metrics.hpp"
#include "meshgrade/random.hpp"
#include "meshgrade/synth.hpp"

using namespace meshgrade;

namespace {

PropertyTable table_of(const Mesh& mesh) {
  return compute_property_table(mesh, build_graph(mesh));
}

std::set<int> rework_ids(const LabelSet& labels) {
  std::set<int> ids;
  for (const auto& [id, label] : labels) {
    if (label == Label::rework) ids.insert(id);
  }
  return ids;
}

SynthSpec one_defect_spec(DefectKind kind, double severity,
                          std::uint64_t seed) {
  SynthSpec spec;
  spec.rows = 6;
  spec.cols = 6;
  spec.defects = {{kind, 1, severity}};
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("flat grid: counts, labels, and pristine metrics") {
  SynthSpec spec;
  spec.rows = 3;
  spec.cols = 3;
  const auto [mesh, labels] = generate_grid(spec);
  CHECK(mesh.elements().size() == 9);
  CHECK(mesh.nodes().size() == 16);
  REQUIRE(labels.size() == 9);
  for (const auto& [id, label] : labels) {
    CHECK(label == Label::passed);
  }

  const PropertyTable table = table_of(mesh);
  for (const Element& element : mesh.elements()) {
    CHECK(table.value(element.id, Property::skewness) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK(table.value(element.id, Property::warpage) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK(table.value(element.id, Property::aspect_ratio) ==
          doctest::Approx(1.0));
    CHECK(table.value(element.id, Property::area) == doctest::Approx(1.0));
    CHECK(table.value(element.id, Property::curvature) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK(table.value(element.id, Property::is_triangle) == 0.0);
  }
  // Only the centre element of a 3x3 grid has no boundary node.
  CHECK(table.value(5, Property::is_border) == 0.0);
  for (int id : {1, 2, 3, 4, 6, 7, 8, 9}) {
    CHECK(table.value(id, Property::is_border) == 1.0);
  }

  CHECK(generate_grid(spec).first.elements().size() == 9);
}

TEST_CASE("grid spacing scales the element area") {
  SynthSpec spec;
  spec.rows = 2;
  spec.cols = 2;
  spec.spacing = 2.5;
  const auto [mesh, labels] = generate_grid(spec);
  const PropertyTable table = table_of(mesh);
  for (const Element& element : mesh.elements()) {
    CHECK(table.value(element.id, Property::area) ==
          doctest::Approx(2.5 * 2.5));
  }
}

TEST_CASE("cylinder quads stay planar and share interior curvature") {
  SynthSpec spec;
  spec.rows = 5;
  spec.cols = 8;
  spec.surface = Surface::cylinder_bend;
  spec.bend_radius = 4.0;
  const auto [mesh, labels] = generate_grid(spec);
  const PropertyTable table = table_of(mesh);
  const NeighbourhoodGraph graph = build_graph(mesh);

  std::vector<double> interior_curvatures;
  for (const Element& element : mesh.elements()) {
    CHECK(table.value(element.id, Property::warpage) < 1e-6);
    if (table.value(element.id, Property::is_border) == 0.0) {
      interior_curvatures.push_back(
          table.value(element.id, Property::curvature));
    }
  }
  REQUIRE(!interior_curvatures.empty());
  for (double curvature : interior_curvatures) {
    CHECK(curvature > 0.1);
    CHECK(curvature == doctest::Approx(interior_curvatures.front()));
  }
}

TEST_CASE("ridge crease sits on a node column, keeping quads planar") {
  SynthSpec spec;
  spec.rows = 4;
  spec.cols = 6;
  spec.surface = Surface::ridge;
  spec.ridge_angle_deg = 35.0;
  const auto [mesh, labels] = generate_grid(spec);
  const PropertyTable table = table_of(mesh);

  bool saw_fold = false;
  for (const Element& element : mesh.elements()) {
    CHECK(table.value(element.id, Property::warpage) < 1e-6);
    if (table.value(element.id, Property::curvature) > 1.0) saw_fold = true;
  }
  CHECK(saw_fold);
}

TEST_CASE("spec validation") {
  SynthSpec spec;
  spec.rows = 1;
  CHECK_THROWS_AS(generate_grid(spec), ConfigError);
  spec.rows = 4;
  spec.spacing = 0.0;
  CHECK_THROWS_AS(generate_grid(spec), ConfigError);
  spec.spacing = 1.0;
  spec.surface = Surface::ridge;
  spec.ridge_angle_deg = 95.0;
  CHECK_THROWS_AS(generate_grid(spec), ConfigError);
  spec.surface = Surface::flat;
  spec.ridge_angle_deg = 30.0;
  spec.defects = {{DefectKind::sliver, 17, 2.0}};  // 17 > 16 elements
  CHECK_THROWS_AS(inject_defects(generate_grid(SynthSpec{}).first, spec),
                  ConfigError);
  spec.defects = {{DefectKind::sliver, 1, 0.0}};
  CHECK_THROWS_AS(inject_defects(generate_grid(SynthSpec{}).first, spec),
                  ConfigError);
}

TEST_CASE("string names roundtrip") {
  for (Surface surface :
       {Surface::flat, Surface::cylinder_bend, Surface::ridge}) {
    CHECK(surface_from_string(to_string(surface)) == surface);
  }
  for (DefectKind kind :
       {DefectKind::sliver, DefectKind::skewed, DefectKind::warped,
        DefectKind::shrunk, DefectKind::triangulated}) {
    CHECK(defect_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(surface_from_string("dome"), ConfigError);
  CHECK_THROWS_AS(defect_kind_from_string("dented"), ConfigError);
}

TEST_CASE("sliver raises the aspect ratio past its margin") {
  const SynthSpec spec = one_defect_spec(DefectKind::sliver, 2.0, 41);
  const auto [mesh, labels] = generate_grid(spec);
  const InjectionResult result = inject_defects(mesh, spec);
  REQUIRE(result.defect_ids.size() == 1);
  const int target = result.defect_ids.front();

  const PropertyTable before = table_of(mesh);
  const PropertyTable after = table_of(result.mesh);
  CHECK(after.value(target, Property::aspect_ratio) > 1.0 + 2.0);
  const std::vector<int>& moved = mesh.element(target).node_ids;
  for (const Element& element : mesh.elements()) {
    if (element.id == target) continue;
    const bool touches_target =
        std::any_of(element.node_ids.begin(), element.node_ids.end(),
                    [&](int node) {
                      return std::find(moved.begin(), moved.end(), node) !=
                             moved.end();
                    });
    if (touches_target) continue;
    // Elements sharing no node with the defect keep their geometry bit
    // for bit.
    CHECK(after.value(element.id, Property::area) ==
          before.value(element.id, Property::area));
    CHECK(after.value(element.id, Property::aspect_ratio) ==
          before.value(element.id, Property::aspect_ratio));
  }
}

TEST_CASE("skew defect adds at least the requested degrees") {
  const SynthSpec spec = one_defect_spec(DefectKind::skewed, 30.0, 42);
  const auto [mesh, labels] = generate_grid(spec);
  const InjectionResult result = inject_defects(mesh, spec);
  REQUIRE(result.defect_ids.size() == 1);
  const int target = result.defect_ids.front();
  const PropertyTable before = table_of(mesh);
  const PropertyTable after = table_of(result.mesh);
  CHECK(after.value(target, Property::skewness) >=
        before.value(target, Property::skewness) + 30.0);
}

TEST_CASE("warp defect lifts one corner past the requested degrees") {
  const SynthSpec spec = one_defect_spec(DefectKind::warped, 45.0, 43);
  const auto [mesh, labels] = generate_grid(spec);
  const InjectionResult result = inject_defects(mesh, spec);
  REQUIRE(result.defect_ids.size() == 1);
  const int target = result.defect_ids.front();
  const PropertyTable before = table_of(mesh);
  const PropertyTable after = table_of(result.mesh);
  CHECK(after.value(target, Property::warpage) >=
        before.value(target, Property::warpage) + 45.0);
  CHECK(after.value(target, Property::warpage) < 179.0);
}

TEST_CASE("shrink defect cuts the area below its margin") {
  const SynthSpec spec = one_defect_spec(DefectKind::shrunk, 3.0, 44);
  const auto [mesh, labels] = generate_grid(spec);
  const InjectionResult result = inject_defects(mesh, spec);
  REQUIRE(result.defect_ids.size() == 1);
  const int target = result.defect_ids.front();
  const PropertyTable before = table_of(mesh);
  const PropertyTable after = table_of(result.mesh);
  CHECK(after.value(target, Property::area) <
        before.value(target, Property::area) / (1.0 + 3.0));
}

TEST_CASE("triangulation splits one quad into two listed triangles") {
  const SynthSpec spec = one_defect_spec(DefectKind::triangulated, 1.0, 45);
  const auto [mesh, labels] = generate_grid(spec);
  const InjectionResult result = inject_defects(mesh, spec);
  CHECK(result.mesh.elements().size() == mesh.elements().size() + 1);
  REQUIRE(result.defect_ids.size() == 2);

  const PropertyTable after = table_of(result.mesh);
  std::set<int> split_nodes;
  for (const int id : result.defect_ids) {
    CHECK(after.value(id, Property::is_triangle) == 1.0);
    const Element& element = result.mesh.element(id);
    REQUIRE(element.node_ids.size() == 3);
    split_nodes.insert(element.node_ids.begin(), element.node_ids.end());
  }
  // The two halves tile the original quad: four distinct nodes, two shared.
  CHECK(split_nodes.size() == 4);
  // The new element continues the id sequence.
  CHECK(result.defect_ids.back() ==
        static_cast<int>(mesh.elements().size()) + 1);
}

TEST_CASE("defects never share nodes") {
  SynthSpec spec;
  spec.rows = 12;
  spec.cols = 12;
  spec.defects = {{DefectKind::sliver, 3, 2.0},
                  {DefectKind::shrunk, 3, 2.0},
                  {DefectKind::skewed, 2, 25.0}};
  spec.seed = 7;
  const auto [mesh, labels] = generate_grid(spec);
  const InjectionResult result = inject_defects(mesh, spec);
  REQUIRE(result.defect_ids.size() == 8);

  std::set<int> seen;
  for (const int id : result.defect_ids) {
    for (const int node : result.mesh.element(id).node_ids) {
      CHECK(seen.insert(node).second);
    }
  }
}

TEST_CASE("impossible placement reports a placement error") {
  // On a 2x2 grid every pair of elements shares the centre node, so a
  // second node-disjoint defect cannot exist.
  SynthSpec spec;
  spec.rows = 2;
  spec.cols = 2;
  spec.defects = {{DefectKind::sliver, 2, 2.0}};
  const auto [mesh, labels] = generate_grid(spec);
  CHECK_THROWS_WITH_AS(inject_defects(mesh, spec),
                       doctest::Contains("could not place"), Error);
}

TEST_CASE("zero defects leave the mesh byte-identical") {
  SynthSpec spec;
  spec.rows = 4;
  spec.cols = 5;
  const auto [mesh, labels] = generate_grid(spec);
  const InjectionResult result = inject_defects(mesh, spec);
  CHECK(result.defect_ids.empty());
  CHECK(serialize_mesh(result.mesh, labels) == serialize_mesh(mesh, labels));
}

TEST_CASE("label dilation matches the ring oracle") {
  const SynthSpec base = one_defect_spec(DefectKind::sliver, 2.0, 51);
  const auto [mesh, labels] = generate_grid(base);
  const InjectionResult result = inject_defects(mesh, base);
  const int target = result.defect_ids.front();

  const LabelSet tight = dilate_labels(result.mesh, result.defect_ids, 0);
  CHECK(rework_ids(tight) ==
        std::set<int>(result.defect_ids.begin(), result.defect_ids.end()));
  REQUIRE(tight.size() == result.mesh.elements().size());

  const LabelSet spread = dilate_labels(result.mesh, result.defect_ids, 1);
  const NeighbourhoodGraph graph = build_graph(result.mesh);
  const std::vector<int> ring = graph.k_ring(target, 1);
  CHECK(rework_ids(spread) == std::set<int>(ring.begin(), ring.end()));

  CHECK_THROWS_AS(dilate_labels(result.mesh, result.defect_ids, -1),
                  ConfigError);
  CHECK_THROWS_AS(dilate_labels(result.mesh, {999}, 1), Error);
}

TEST_CASE("generate is deterministic and marks every defect rework") {
  SynthSpec spec;
  spec.rows = 8;
  spec.cols = 8;
  spec.defects = {{DefectKind::warped, 2, 40.0},
                  {DefectKind::triangulated, 1, 1.0}};
  spec.seed = 77;

  const LabelledMesh first = generate(spec, "sample");
  const LabelledMesh second = generate(spec, "sample");
  CHECK(first.id == "sample");
  CHECK(serialize_mesh(first.mesh, first.labels) ==
        serialize_mesh(second.mesh, second.labels));

  spec.seed = 78;
  const LabelledMesh other = generate(spec, "sample");
  CHECK(serialize_mesh(other.mesh, other.labels) !=
        serialize_mesh(first.mesh, first.labels));

  // Labels cover everything and the defects made it into the rework set.
  REQUIRE(first.labels.size() == first.mesh.elements().size());
  CHECK(rework_ids(first.labels).size() >= 3);
}

TEST_CASE("benchmark corpus: size, ids, determinism, rework share") {
  const std::vector<LabelledMesh> corpus = make_benchmark(7);
  REQUIRE(corpus.size() == static_cast<std::size_t>(kBenchmarkMeshCount));
  CHECK(corpus.front().id == "synth-000");
  CHECK(corpus.back().id == "synth-059");

  long total = 0;
  long rework = 0;
  std::set<std::string> ids;
  for (const LabelledMesh& labelled : corpus) {
    CHECK(ids.insert(labelled.id).second);
    REQUIRE(labelled.labels.size() == labelled.mesh.elements().size());
    CHECK(labelled.mesh.elements().size() >= 25);
    for (const auto& [id, label] : labelled.labels) {
      ++total;
      if (label == Label::rework) ++rework;
    }
  }
  const double share = static_cast<double>(rework) / static_cast<double>(total);
  CHECK(share > 0.02);
  CHECK(share < 0.04);

  // Same seed reproduces the corpus; a mesh's seed is exposed for the
  // manifest.
  const std::vector<LabelledMesh> again = make_benchmark(7);
  CHECK(serialize_mesh(again[13].mesh, again[13].labels) ==
        serialize_mesh(corpus[13].mesh, corpus[13].labels));
  CHECK(benchmark_mesh_seed(7, 13) != benchmark_mesh_seed(7, 14));
}
