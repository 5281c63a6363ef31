#include "meshgrade/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "meshgrade/error.hpp"

namespace meshgrade {

namespace {

using Json = nlohmann::ordered_json;

int require_int(const Json& value, const char* where) {
  if (!value.is_number_integer()) {
    throw ParseError(std::string(where) + " must be an integer");
  }
  return value.get<int>();
}

Eigen::Vector3d require_xyz(const Json& value, int node_id) {
  if (!value.is_array() || value.size() != 3) {
    throw ParseError("node " + std::to_string(node_id) +
                     ": xyz must be an array of 3 numbers");
  }
  Eigen::Vector3d position;
  for (int i = 0; i < 3; ++i) {
    if (!value[i].is_number()) {
      throw ParseError("node " + std::to_string(node_id) +
                       ": xyz must be an array of 3 numbers");
    }
    position[i] = value[i].get<double>();
  }
  return position;
}

int parse_id_key(const std::string& key) {
  if (key.empty() ||
      !std::all_of(key.begin(), key.end(),
                   [](unsigned char c) { return std::isdigit(c); })) {
    throw ParseError("label key \"" + key + "\" is not an element id");
  }
  return std::stoi(key);
}

void throw_on_findings(const ValidationReport& report) {
  if (report.empty()) return;
  std::string message = report.front().message;
  if (report.size() > 1) {
    message += " (and " + std::to_string(report.size() - 1) + " more finding" +
               (report.size() > 2 ? "s" : "") + ")";
  }
  throw ParseError(message);
}

// findings == nullptr means invariant violations throw; otherwise they are
// collected and the mesh is returned as parsed.
ParsedMesh parse_mesh_impl(const std::string& text,
                           ValidationReport* findings) {
  Json document = Json::parse(text, nullptr, false);
  if (document.is_discarded()) {
    throw ParseError("document is not well-formed");
  }
  if (!document.is_object()) {
    throw ParseError("document root must be an object");
  }
  if (!document.contains("format") || !document["format"].is_string() ||
      document["format"].get<std::string>() != kMeshFormatTag) {
    throw ParseError(std::string("missing or unsupported format tag, "
                                 "expected \"") +
                     kMeshFormatTag + "\"");
  }
  if (!document.contains("nodes") || !document["nodes"].is_array()) {
    throw ParseError("\"nodes\" must be an array");
  }
  if (!document.contains("elements") || !document["elements"].is_array()) {
    throw ParseError("\"elements\" must be an array");
  }

  std::vector<Node> nodes;
  nodes.reserve(document["nodes"].size());
  for (const Json& entry : document["nodes"]) {
    if (!entry.is_object() || !entry.contains("id") ||
        !entry.contains("xyz")) {
      throw ParseError("each node needs \"id\" and \"xyz\"");
    }
    Node node;
    node.id = require_int(entry["id"], "node id");
    if (node.id < 1) {
      throw ParseError("node id " + std::to_string(node.id) +
                       " must be positive");
    }
    node.position = require_xyz(entry["xyz"], node.id);
    nodes.push_back(std::move(node));
  }

  std::vector<Element> elements;
  elements.reserve(document["elements"].size());
  for (const Json& entry : document["elements"]) {
    if (!entry.is_object() || !entry.contains("id") ||
        !entry.contains("nodes") || !entry["nodes"].is_array()) {
      throw ParseError("each element needs \"id\" and a \"nodes\" array");
    }
    Element element;
    element.id = require_int(entry["id"], "element id");
    if (element.id < 1) {
      throw ParseError("element id " + std::to_string(element.id) +
                       " must be positive");
    }
    for (const Json& node_ref : entry["nodes"]) {
      element.node_ids.push_back(require_int(node_ref, "element node ref"));
    }
    elements.push_back(std::move(element));
  }

  ParsedMesh result{Mesh(std::move(nodes), std::move(elements)), {}};
  ValidationReport report = validate_mesh(result.mesh);

  if (document.contains("labels")) {
    if (!document["labels"].is_object()) {
      throw ParseError("\"labels\" must be a map element id -> label");
    }
    LabelSet labels;
    for (const auto& [key, value] : document["labels"].items()) {
      if (!value.is_string()) {
        throw ParseError("label for element " + key + " must be a string");
      }
      labels[parse_id_key(key)] = label_from_string(value.get<std::string>());
    }
    ValidationReport label_report =
        validate_labels(result.mesh, labels, false);
    report.insert(report.end(), label_report.begin(), label_report.end());
    result.labels = std::move(labels);
  }

  if (findings != nullptr) {
    findings->insert(findings->end(), report.begin(), report.end());
  } else {
    throw_on_findings(report);
  }
  return result;
}

}  // namespace

ParsedMesh parse_mesh(const std::string& text) {
  return parse_mesh_impl(text, nullptr);
}

ParsedMesh parse_mesh(const std::string& text, ValidationReport& findings) {
  return parse_mesh_impl(text, &findings);
}

std::string serialize_mesh(const Mesh& mesh,
                           const std::optional<LabelSet>& labels) {
  std::vector<const Node*> nodes;
  nodes.reserve(mesh.nodes().size());
  for (const Node& node : mesh.nodes()) nodes.push_back(&node);
  std::sort(nodes.begin(), nodes.end(),
            [](const Node* a, const Node* b) { return a->id < b->id; });

  std::vector<const Element*> elements;
  elements.reserve(mesh.elements().size());
  for (const Element& element : mesh.elements()) elements.push_back(&element);
  std::sort(elements.begin(), elements.end(),
            [](const Element* a, const Element* b) { return a->id < b->id; });

  Json document;
  document["format"] = kMeshFormatTag;
  document["nodes"] = Json::array();
  for (const Node* node : nodes) {
    Json entry;
    entry["id"] = node->id;
    entry["xyz"] = {node->position.x(), node->position.y(),
                    node->position.z()};
    document["nodes"].push_back(std::move(entry));
  }
  document["elements"] = Json::array();
  for (const Element* element : elements) {
    Json entry;
    entry["id"] = element->id;
    entry["nodes"] = element->node_ids;
    document["elements"].push_back(std::move(entry));
  }
  if (labels) {
    Json label_map = Json::object();
    for (const auto& [element_id, label] : *labels) {  // map is id-sorted
      label_map[std::to_string(element_id)] = to_string(label);
    }
    document["labels"] = std::move(label_map);
  }
  return document.dump(2) + "\n";
}

Mesh import_obj(const std::string& text) {
  std::vector<Node> nodes;
  std::vector<Element> elements;

  std::istringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::string record;
    if (!(fields >> record)) continue;  // blank line
    const std::string at = "line " + std::to_string(line_number) + ": ";

    if (record == "v") {
      double x, y, z;
      if (!(fields >> x >> y >> z)) {
        throw ParseError(at + "vertex needs 3 coordinates");
      }
      std::string extra;
      if (fields >> extra) {
        throw ParseError(at + "vertex has more than 3 coordinates");
      }
      Node node;
      node.id = static_cast<int>(nodes.size()) + 1;
      node.position = Eigen::Vector3d(x, y, z);
      nodes.push_back(node);
    } else if (record == "f") {
      std::vector<int> refs;
      std::string token;
      while (fields >> token) {
        std::size_t consumed = 0;
        int index = 0;
        try {
          index = std::stoi(token, &consumed);
        } catch (const std::exception&) {
          consumed = 0;
        }
        if (consumed != token.size()) {
          throw ParseError(at + "face index \"" + token +
                           "\" is not a plain integer");
        }
        if (index < 1 || index > static_cast<int>(nodes.size())) {
          throw ParseError(at + "face index " + std::to_string(index) +
                           " out of range");
        }
        refs.push_back(index);
      }
      if (refs.size() < 3 || refs.size() > 4) {
        throw ParseError(at + "face has " + std::to_string(refs.size()) +
                         " vertices, expected 3 or 4");
      }
      Element element;
      element.id = static_cast<int>(elements.size()) + 1;
      element.node_ids = std::move(refs);
      elements.push_back(std::move(element));
    }
    // Other record kinds (vn, vt, comments, groups) carry nothing we keep.
  }

  Mesh mesh(std::move(nodes), std::move(elements));
  throw_on_findings(validate_mesh(mesh));
  return mesh;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    throw Error("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) {
    throw Error("cannot write " + path.string());
  }
  stream << content;
  if (!stream) {
    throw Error("write failed for " + path.string());
  }
}

ParsedMesh load_mesh_file(const std::filesystem::path& path) {
  try {
    return parse_mesh(read_text_file(path));
  } catch (const ParseError& error) {
    throw ParseError(path.string() + ": " +
                     std::string(error.what()).substr(7));  // drop "parse: "
  }
}

}  // namespace meshgrade
