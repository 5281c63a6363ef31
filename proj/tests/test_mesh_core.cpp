#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "meshgrade/error.hpp"
#include "meshgrade/mesh.hpp"
#include "meshgrade/mesh_io.hpp"

using namespace meshgrade;

namespace {

Mesh two_quad_strip() {
  return Mesh(
      {
          {1, {0, 0, 0}},
          {2, {1, 0, 0}},
          {3, {2, 0, 0}},
          {4, {0, 1, 0}},
          {5, {1, 1, 0}},
          {6, {2, 1, 0}},
      },
      {
          {1, {1, 2, 5, 4}},
          {2, {2, 3, 6, 5}},
      });
}

bool has_finding(const ValidationReport& report, const std::string& code) {
  for (const Finding& finding : report) {
    if (finding.code == code) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("minimal triangle document parses without labels") {
  const std::string text = R"({
    "format": "meshgrade/v1",
    "nodes": [
      {"id": 1, "xyz": [0, 0, 0]},
      {"id": 2, "xyz": [1, 0, 0]},
      {"id": 3, "xyz": [0, 1, 0]}
    ],
    "elements": [{"id": 1, "nodes": [1, 2, 3]}]
  })";
  const ParsedMesh parsed = parse_mesh(text);
  CHECK(parsed.mesh.nodes().size() == 3);
  CHECK(parsed.mesh.elements().size() == 1);
  CHECK(parsed.mesh.elements().front().is_triangle());
  CHECK_FALSE(parsed.labels.has_value());
}

TEST_CASE("dangling node reference is a parse error") {
  const std::string text = R"({
    "format": "meshgrade/v1",
    "nodes": [
      {"id": 1, "xyz": [0, 0, 0]},
      {"id": 2, "xyz": [1, 0, 0]},
      {"id": 3, "xyz": [0, 1, 0]}
    ],
    "elements": [{"id": 1, "nodes": [1, 2, 99]}]
  })";
  CHECK_THROWS_AS(parse_mesh(text), ParseError);
}

TEST_CASE("malformed and mistagged documents are rejected") {
  CHECK_THROWS_AS(parse_mesh("not a document"), ParseError);
  CHECK_THROWS_AS(parse_mesh("{}"), ParseError);
  CHECK_THROWS_AS(parse_mesh(R"({"format": "other/v9"})"), ParseError);
}

TEST_CASE("serialize then reparse is the identity") {
  const Mesh mesh = two_quad_strip();
  LabelSet labels{{1, Label::rework}, {2, Label::passed}};

  const std::string text = serialize_mesh(mesh, labels);
  const ParsedMesh back = parse_mesh(text);

  REQUIRE(back.mesh.nodes().size() == mesh.nodes().size());
  REQUIRE(back.mesh.elements().size() == mesh.elements().size());
  for (const Node& node : mesh.nodes()) {
    CHECK(back.mesh.node(node.id).position == node.position);
  }
  for (const Element& element : mesh.elements()) {
    CHECK(back.mesh.element(element.id).node_ids == element.node_ids);
  }
  REQUIRE(back.labels.has_value());
  CHECK(*back.labels == labels);

  // Reserializing the reparsed mesh reproduces the document byte for byte.
  CHECK(serialize_mesh(back.mesh, back.labels) == text);
}

TEST_CASE("serialization is deterministic and id-sorted") {
  const Mesh shuffled(
      {
          {6, {2, 1, 0}},
          {3, {2, 0, 0}},
          {1, {0, 0, 0}},
          {5, {1, 1, 0}},
          {2, {1, 0, 0}},
          {4, {0, 1, 0}},
      },
      {
          {2, {2, 3, 6, 5}},
          {1, {1, 2, 5, 4}},
      });
  CHECK(serialize_mesh(shuffled) == serialize_mesh(two_quad_strip()));
  CHECK(serialize_mesh(shuffled) == serialize_mesh(shuffled));
}

TEST_CASE("labels section appears exactly when labels are given") {
  const Mesh mesh = two_quad_strip();
  const std::string without = serialize_mesh(mesh);
  CHECK(without.find("labels") == std::string::npos);
  const std::string with =
      serialize_mesh(mesh, LabelSet{{1, Label::rework}});
  CHECK(with.find("\"labels\"") != std::string::npos);
  CHECK(with.find("\"rework\"") != std::string::npos);
}

TEST_CASE("validate_mesh accepts a valid strip") {
  CHECK(validate_mesh(two_quad_strip()).empty());
}

TEST_CASE("validate_mesh reports one finding per violation kind") {
  SUBCASE("repeated node in element") {
    const Mesh mesh({{1, {0, 0, 0}}, {2, {1, 0, 0}}},
                    {{1, {1, 1, 2}}});
    CHECK(has_finding(validate_mesh(mesh), "repeated-node"));
  }
  SUBCASE("duplicate element over the same node set") {
    const Mesh mesh(
        {{1, {0, 0, 0}}, {2, {1, 0, 0}}, {3, {0, 1, 0}}},
        {{1, {1, 2, 3}}, {2, {3, 1, 2}}});
    CHECK(has_finding(validate_mesh(mesh), "duplicate-element"));
  }
  SUBCASE("duplicate node id") {
    const Mesh mesh({{1, {0, 0, 0}}, {1, {1, 0, 0}}, {3, {0, 1, 0}}},
                    {{1, {1, 1, 3}}});
    CHECK(has_finding(validate_mesh(mesh), "duplicate-node-id"));
  }
  SUBCASE("duplicate element id") {
    const Mesh mesh(
        {{1, {0, 0, 0}}, {2, {1, 0, 0}}, {3, {0, 1, 0}}, {4, {1, 1, 0}}},
        {{1, {1, 2, 3}}, {1, {2, 4, 3}}});
    CHECK(has_finding(validate_mesh(mesh), "duplicate-element-id"));
  }
  SUBCASE("non-finite position") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const Mesh mesh({{1, {0, 0, nan}}, {2, {1, 0, 0}}, {3, {0, 1, 0}}},
                    {{1, {1, 2, 3}}});
    CHECK(has_finding(validate_mesh(mesh), "nonfinite-position"));
  }
  SUBCASE("bad arity") {
    const Mesh mesh({{1, {0, 0, 0}}, {2, {1, 0, 0}}},
                    {{1, {1, 2}}});
    CHECK(has_finding(validate_mesh(mesh), "bad-arity"));
  }
  SUBCASE("unknown node reference") {
    const Mesh mesh({{1, {0, 0, 0}}, {2, {1, 0, 0}}},
                    {{1, {1, 2, 9}}});
    CHECK(has_finding(validate_mesh(mesh), "unknown-node"));
  }
  SUBCASE("empty mesh") {
    const Mesh mesh({{1, {0, 0, 0}}}, {});
    CHECK(has_finding(validate_mesh(mesh), "empty-mesh"));
  }
}

TEST_CASE("label validation") {
  const Mesh mesh = two_quad_strip();
  SUBCASE("unknown element id") {
    CHECK(has_finding(validate_labels(mesh, {{9, Label::rework}}, false),
                      "unknown-element"));
  }
  SUBCASE("ground truth requires complete cover") {
    const LabelSet partial{{1, Label::passed}};
    CHECK(validate_labels(mesh, partial, false).empty());
    CHECK(has_finding(validate_labels(mesh, partial, true),
                      "unlabelled-element"));
  }
}

TEST_CASE("obj import maps faces to elements") {
  SUBCASE("triangle") {
    const Mesh mesh = import_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nf 1 2 3\n");
    REQUIRE(mesh.elements().size() == 1);
    CHECK(mesh.elements().front().is_triangle());
    CHECK(mesh.nodes().size() == 3);
  }
  SUBCASE("quadrilateral with winding preserved") {
    const Mesh mesh =
        import_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
    REQUIRE(mesh.elements().size() == 1);
    CHECK(mesh.elements().front().node_ids == std::vector<int>{1, 2, 3, 4});
  }
  SUBCASE("five-vertex face is rejected") {
    CHECK_THROWS_AS(
        import_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nv 2 2 0\n"
                   "f 1 2 3 4 5\n"),
        ParseError);
  }
  SUBCASE("out-of-range index is rejected") {
    CHECK_THROWS_AS(import_obj("v 0 0 0\nv 1 0 0\nf 1 2 3\n"), ParseError);
  }
  SUBCASE("irrelevant records are skipped") {
    const Mesh mesh = import_obj(
        "# comment\ng part\nvn 0 0 1\nv 0 0 0\nv 1 0 0\nv 1 1 0\nf 1 2 3\n");
    CHECK(mesh.nodes().size() == 3);
    CHECK(mesh.elements().size() == 1);
  }
}

TEST_CASE("lenient parse returns findings instead of throwing") {
  const std::string text = R"({
    "format": "meshgrade/v1",
    "nodes": [
      {"id": 1, "xyz": [0, 0, 0]},
      {"id": 2, "xyz": [1, 0, 0]},
      {"id": 3, "xyz": [0, 1, 0]}
    ],
    "elements": [{"id": 1, "nodes": [1, 2, 99]}]
  })";
  ValidationReport findings;
  const ParsedMesh parsed = parse_mesh(text, findings);
  CHECK(parsed.mesh.elements().size() == 1);
  CHECK(has_finding(findings, "unknown-node"));
}

TEST_CASE("element position matrix follows winding order") {
  const Mesh mesh = two_quad_strip();
  const Eigen::Matrix3Xd positions =
      element_positions(mesh, mesh.element(1));
  REQUIRE(positions.cols() == 4);
  CHECK(positions.col(0) == Eigen::Vector3d(0, 0, 0));
  CHECK(positions.col(1) == Eigen::Vector3d(1, 0, 0));
  CHECK(positions.col(2) == Eigen::Vector3d(1, 1, 0));
  CHECK(positions.col(3) == Eigen::Vector3d(0, 1, 0));
}

TEST_CASE("mesh lookups throw on unknown ids") {
  const Mesh mesh = two_quad_strip();
  CHECK_THROWS_AS(mesh.node(99), Error);
  CHECK_THROWS_AS(mesh.element(99), Error);
  CHECK(mesh.has_node(1));
  CHECK_FALSE(mesh.has_element(99));
}
